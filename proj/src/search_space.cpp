#include "blockopt/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace blockopt {

Domain Domain::continuous(double lo, double hi, bool log_scale, bool upper_open) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw SpaceError("continuous domain requires finite lo < hi");
  }
  if (log_scale && lo <= 0.0) {
    throw SpaceError("log-scaled domain requires lo > 0");
  }
  return Domain(ContinuousDomain{lo, hi, log_scale, upper_open});
}

Domain Domain::integer(std::int64_t lo, std::int64_t hi, bool upper_open) {
  if (lo >= hi) throw SpaceError("integer domain requires lo < hi");
  return Domain(IntegerDomain{lo, hi, upper_open});
}

Domain Domain::categorical(std::vector<std::string> labels) {
  if (labels.empty()) throw SpaceError("categorical domain requires labels");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw SpaceError("categorical labels must be distinct");
  return Domain(CategoricalDomain{std::move(labels)});
}

std::string to_string(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os.precision(17);
          os << x;
          return os.str();
        } else {
          return std::to_string(x);
        }
      },
      v);
}

SearchSpace::SearchSpace(std::vector<Variable> variables) : variables_(std::move(variables)) {
  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw SpaceError("variable name must be nonempty");
    if (!seen.insert(v.name).second) throw SpaceError("duplicate variable '" + v.name + "'");
  }
}

bool SearchSpace::contains(const std::string& name) const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [&](const Variable& v) { return v.name == name; });
}

const Variable& SearchSpace::at(const std::string& name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return v;
  }
  throw SpaceError("unknown variable '" + name + "'");
}

std::vector<std::string> SearchSpace::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

SearchSpace SearchSpace::with_domain(const std::string& name, Domain domain) const {
  auto vars = variables_;
  bool found = false;
  for (auto& v : vars) {
    if (v.name == name) {
      v.domain = domain;
      found = true;
    }
  }
  if (!found) throw SpaceError("unknown variable '" + name + "'");
  return SearchSpace(std::move(vars));
}

SearchSpace SearchSpace::project(std::span<const std::string> names) const {
  for (const auto& n : names) at(n);
  std::vector<Variable> vars;
  for (const auto& v : variables_) {
    if (std::find(names.begin(), names.end(), v.name) != names.end()) vars.push_back(v);
  }
  return SearchSpace(std::move(vars));
}

bool contains_value(const Domain& d, const Value& v) {
  if (d.is_continuous()) {
    const auto* x = std::get_if<double>(&v);
    if (x == nullptr || !std::isfinite(*x)) return false;
    const auto& c = d.as_continuous();
    return *x >= c.lo && (c.upper_open ? *x < c.hi : *x <= c.hi);
  }
  if (d.is_integer()) {
    const auto* x = std::get_if<std::int64_t>(&v);
    if (x == nullptr) return false;
    const auto& i = d.as_integer();
    return *x >= i.lo && *x <= i.last();
  }
  const auto* s = std::get_if<std::string>(&v);
  if (s == nullptr) return false;
  const auto& labels = d.as_categorical().labels;
  return std::find(labels.begin(), labels.end(), *s) != labels.end();
}

void validate(const SearchSpace& space, const Assignment& a) {
  for (const auto& [name, value] : a) {
    if (!space.contains(name)) throw SpaceError("unknown variable '" + name + "'");
    if (!contains_value(space.at(name).domain, value)) {
      throw SpaceError("value " + to_string(value) + " outside domain of '" + name + "'");
    }
  }
}

void validate_full(const SearchSpace& space, const Assignment& a) {
  validate(space, a);
  for (const auto& v : space.variables()) {
    if (!a.contains(v.name)) throw SpaceError("variable '" + v.name + "' is unbound");
  }
}

bool is_full(const SearchSpace& space, const Assignment& a) {
  if (a.size() != space.size()) return false;
  return std::all_of(space.variables().begin(), space.variables().end(),
                     [&](const Variable& v) { return a.contains(v.name); });
}

std::vector<std::string> Subgoal::fixed_vars() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : fixed) out.push_back(name);
  return out;
}

SearchSpace substitute(const SearchSpace& space, const Subgoal& subgoal) {
  validate(space, subgoal.fixed);
  std::vector<Variable> free;
  for (const auto& v : space.variables()) {
    if (!subgoal.fixed.contains(v.name)) free.push_back(v);
  }
  return SearchSpace(std::move(free));
}

Assignment merge(const Assignment& a, const Assignment& b) {
  Assignment out = a;
  for (const auto& [name, value] : b) {
    if (!out.emplace(name, value).second) {
      throw SpaceError("overlap on variable '" + name + "'");
    }
  }
  return out;
}

Assignment restrict_to(const Assignment& a, std::span<const std::string> names) {
  Assignment out;
  for (const auto& n : names) {
    if (auto it = a.find(n); it != a.end()) out.emplace(n, it->second);
  }
  return out;
}

double sample_coord(const Domain& d, Rng& rng) {
  if (d.is_continuous()) {
    const auto& c = d.as_continuous();
    if (c.log_scale) {
      std::uniform_real_distribution<double> u(std::log10(c.lo), std::log10(c.hi));
      double x = std::pow(10.0, u(rng));
      // pow can round onto or past the bounds
      x = std::clamp(x, c.lo, c.hi);
      if (c.upper_open && x >= c.hi) x = std::nextafter(c.hi, c.lo);
      return x;
    }
    std::uniform_real_distribution<double> u(c.lo, c.hi);
    double x = u(rng);
    if (!c.upper_open && x > c.hi) x = c.hi;
    if (c.upper_open && x >= c.hi) x = std::nextafter(c.hi, c.lo);
    return x;
  }
  if (d.is_integer()) {
    const auto& i = d.as_integer();
    std::uniform_int_distribution<std::int64_t> u(i.lo, i.last());
    return static_cast<double>(u(rng));
  }
  std::uniform_int_distribution<std::size_t> u(0, d.as_categorical().labels.size() - 1);
  return static_cast<double>(u(rng));
}

double coord_of(const Domain& d, const Value& v) {
  if (d.is_continuous()) return std::get<double>(v);
  if (d.is_integer()) return static_cast<double>(std::get<std::int64_t>(v));
  const auto& labels = d.as_categorical().labels;
  const auto it = std::find(labels.begin(), labels.end(), std::get<std::string>(v));
  if (it == labels.end()) throw SpaceError("label '" + std::get<std::string>(v) + "' not in domain");
  return static_cast<double>(it - labels.begin());
}

Value value_from_coord(const Domain& d, double x) {
  if (d.is_continuous()) return x;
  if (d.is_integer()) return static_cast<std::int64_t>(std::llround(x));
  const auto& labels = d.as_categorical().labels;
  const auto k = static_cast<std::size_t>(std::llround(x));
  if (k >= labels.size()) throw SpaceError("label index out of range");
  return labels[k];
}

Value sample_value(const Domain& d, Rng& rng) { return value_from_coord(d, sample_coord(d, rng)); }

std::vector<double> to_coords(const SearchSpace& space, const Assignment& a) {
  std::vector<double> out;
  out.reserve(space.size());
  for (const auto& v : space.variables()) out.push_back(coord_of(v.domain, a.at(v.name)));
  return out;
}

Assignment from_coords(const SearchSpace& space, std::span<const double> coords) {
  if (coords.size() != space.size()) throw SpaceError("coordinate count does not match space");
  Assignment a;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const auto& v = space.variables()[k];
    a.emplace(v.name, value_from_coord(v.domain, coords[k]));
  }
  return a;
}

std::vector<Assignment> sample_uniform(const SearchSpace& space, Rng& rng, std::size_t n) {
  if (n == 0) throw SpaceError("sample_uniform requires n >= 1");
  std::vector<Assignment> out(n);
  for (auto& a : out) {
    for (const auto& v : space.variables()) a.emplace(v.name, sample_value(v.domain, rng));
  }
  return out;
}

std::vector<Domain> split_numeric(const Variable& var, std::span<const double> cutpoints) {
  if (var.domain.is_categorical()) {
    throw SpaceError("cannot split categorical variable '" + var.name + "'");
  }
  for (std::size_t k = 1; k < cutpoints.size(); ++k) {
    if (!(cutpoints[k - 1] < cutpoints[k])) throw SpaceError("cutpoints must be strictly increasing");
  }
  std::vector<Domain> out;
  if (var.domain.is_continuous()) {
    const auto& c = var.domain.as_continuous();
    double lo = c.lo;
    for (double cut : cutpoints) {
      if (!(cut > c.lo && cut < c.hi)) throw SpaceError("cutpoint out of range for '" + var.name + "'");
      out.push_back(Domain::continuous(lo, cut, c.log_scale, true));
      lo = cut;
    }
    out.push_back(Domain::continuous(lo, c.hi, c.log_scale, c.upper_open));
    return out;
  }
  const auto& i = var.domain.as_integer();
  std::int64_t lo = i.lo;
  for (double cut : cutpoints) {
    if (cut != std::floor(cut)) throw SpaceError("integer cutpoints must be whole numbers");
    const auto icut = static_cast<std::int64_t>(cut);
    if (!(icut > i.lo && icut < i.hi)) throw SpaceError("cutpoint out of range for '" + var.name + "'");
    out.push_back(Domain::integer(lo, icut, true));
    lo = icut;
  }
  out.push_back(Domain::integer(lo, i.hi, i.upper_open));
  return out;
}

Value default_value(const Domain& d) {
  if (d.is_continuous()) {
    const auto& c = d.as_continuous();
    if (c.log_scale) return std::pow(10.0, 0.5 * (std::log10(c.lo) + std::log10(c.hi)));
    return 0.5 * (c.lo + c.hi);
  }
  if (d.is_integer()) {
    const auto& i = d.as_integer();
    return i.lo + (i.last() - i.lo) / 2;
  }
  return d.as_categorical().labels.front();
}

Assignment default_assignment(const SearchSpace& space) {
  Assignment out;
  for (const auto& v : space.variables()) out.emplace(v.name, default_value(v.domain));
  return out;
}

double numeric_value(const Value& v) {
  if (const auto* x = std::get_if<double>(&v)) return *x;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw SpaceError("expected a numeric value, got label '" + std::get<std::string>(v) + "'");
}

std::size_t encoded_width(const SearchSpace& space) {
  std::size_t w = 0;
  for (const auto& v : space.variables()) {
    w += v.domain.is_categorical() ? v.domain.as_categorical().labels.size() : 1;
  }
  return w;
}

void encode_coords(const SearchSpace& space, std::span<const double> coords, std::span<double> out) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < space.size(); ++j) {
    const auto& d = space.variables()[j].domain;
    const double x = coords[j];
    if (d.is_continuous()) {
      const auto& c = d.as_continuous();
      out[k++] = c.log_scale ? (std::log10(x) - std::log10(c.lo)) / (std::log10(c.hi) - std::log10(c.lo))
                             : (x - c.lo) / (c.hi - c.lo);
    } else if (d.is_integer()) {
      const auto& i = d.as_integer();
      const double span = static_cast<double>(i.last() - i.lo);
      out[k++] = span > 0 ? (x - static_cast<double>(i.lo)) / span : 0.0;
    } else {
      const auto n = d.as_categorical().labels.size();
      const auto hot = static_cast<std::size_t>(std::llround(x));
      for (std::size_t l = 0; l < n; ++l) out[k++] = (l == hot) ? 1.0 : 0.0;
    }
  }
}

void encode(const SearchSpace& space, const Assignment& a, std::span<double> out) {
  const auto coords = to_coords(space, a);
  encode_coords(space, coords, out);
}

}  // namespace blockopt
