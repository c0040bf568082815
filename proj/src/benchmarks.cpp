#include "blockopt/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace blockopt {

double branin(double x1, double x2) {
  constexpr double pi = std::numbers::pi;
  constexpr double b = 5.1 / (4.0 * pi * pi);
  constexpr double c = 5.0 / pi;
  constexpr double t = 1.0 / (8.0 * pi);
  const double q = x2 - b * x1 * x1 + c * x1 - 6.0;
  return q * q + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

double hartmann6(std::span<const double> x) {
  static constexpr std::array<double, 4> alpha = {1.0, 1.2, 3.0, 3.2};
  static constexpr double a[4][6] = {{10, 3, 17, 3.5, 1.7, 8},
                                     {0.05, 10, 17, 0.1, 8, 14},
                                     {3, 3.5, 1.7, 10, 17, 8},
                                     {17, 8, 0.05, 10, 0.1, 14}};
  static constexpr double p[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                     {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                     {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                     {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 6; ++j) inner += a[i][j] * (x[j] - p[i][j]) * (x[j] - p[i][j]);
    sum += alpha[i] * std::exp(-inner);
  }
  return -sum;
}

std::vector<double> Benchmark::to_dense(const Assignment& a) const {
  std::vector<double> x;
  x.reserve(space.size());
  for (const auto& v : space.variables()) {
    const Value& value = a.at(v.name);
    if (v.domain.is_categorical()) {
      const auto& labels = v.domain.as_categorical().labels;
      const auto it = std::find(labels.begin(), labels.end(), std::get<std::string>(value));
      x.push_back(static_cast<double>(it - labels.begin()));
    } else {
      x.push_back(numeric_value(value));
    }
  }
  return x;
}

Assignment Benchmark::from_dense(std::span<const double> x) const {
  Assignment a;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& v = space.variables()[i];
    if (v.domain.is_categorical()) {
      a.emplace(v.name, v.domain.as_categorical().labels.at(static_cast<std::size_t>(x[i])));
    } else if (v.domain.is_integer()) {
      a.emplace(v.name, static_cast<std::int64_t>(std::llround(x[i])));
    } else {
      a.emplace(v.name, x[i]);
    }
  }
  return a;
}

double Benchmark::operator()(const Assignment& a) const { return dense(to_dense(a)); }

std::vector<std::string> benchmark_names() { return {"branin", "hartmann6", "separable20", "cash3"}; }

Benchmark load_benchmark(const std::string& name) {
  Benchmark b;
  b.name = name;
  if (name == "branin") {
    b.space = SearchSpace({{"x1", Domain::continuous(-5, 10)}, {"x2", Domain::continuous(0, 15)}});
    b.dense = [](std::span<const double> x) { return branin(x[0], x[1]); };
  } else if (name == "hartmann6") {
    std::vector<Variable> vars;
    for (int i = 1; i <= 6; ++i) vars.push_back({"x" + std::to_string(i), Domain::continuous(0, 1)});
    b.space = SearchSpace(std::move(vars));
    b.dense = [](std::span<const double> x) { return hartmann6(x); };
  } else if (name == "separable20") {
    std::vector<Variable> vars;
    for (int i = 1; i <= 10; ++i) vars.push_back({"y" + std::to_string(i), Domain::continuous(-5, 5)});
    for (int i = 1; i <= 10; ++i) vars.push_back({"z" + std::to_string(i), Domain::continuous(-5, 5)});
    b.space = SearchSpace(std::move(vars));
    b.dense = [](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t i = 0; i < 10; ++i) s += x[i] * x[i];
      for (std::size_t i = 10; i < 20; ++i) s += (x[i] - 1.0) * (x[i] - 1.0);
      return s;
    };
  } else if (name == "cash3") {
    b.space = SearchSpace({{"arm", Domain::categorical({"a0", "a1", "a2"})},
                           {"x1", Domain::continuous(-5, 10)},
                           {"x2", Domain::continuous(0, 15)}});
    b.dense = [](std::span<const double> x) {
      static constexpr std::array<double, 3> offset = {0.0, 5.0, 10.0};
      return branin(x[1], x[2]) + offset[static_cast<std::size_t>(x[0])];
    };
    b.annotations = Annotations{"arm", {"x1"}, {"x2"}};
  } else {
    throw std::invalid_argument("unknown benchmark '" + name + "'");
  }
  return b;
}

ObjectiveSpec benchmark_objective(const Benchmark& b, BudgetMode mode) {
  return make_objective(b.space, [b](const Assignment& a, double) { return b(a); }, mode);
}

std::vector<std::vector<double>> grid_levels(const SearchSpace& space, std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
  std::vector<std::vector<double>> levels;
  for (const auto& v : space.variables()) {
    std::vector<double> l;
    if (v.domain.is_categorical()) {
      for (std::size_t i = 0; i < v.domain.as_categorical().labels.size(); ++i) l.push_back(static_cast<double>(i));
    } else if (v.domain.is_integer()) {
      const auto& d = v.domain.as_integer();
      const auto n = static_cast<std::size_t>(d.count());
      const std::size_t k = std::min(n, resolution);
      for (std::size_t i = 0; i < k; ++i) {
        const double t = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
        const double x = std::round(static_cast<double>(d.lo) + t * static_cast<double>(d.last() - d.lo));
        if (l.empty() || l.back() != x) l.push_back(x);
      }
    } else {
      const auto& d = v.domain.as_continuous();
      const double lo = d.log_scale ? std::log10(d.lo) : d.lo;
      const double hi = d.log_scale ? std::log10(d.hi) : d.hi;
      // an open upper end stops one step short of hi
      const double denom = static_cast<double>(d.upper_open ? resolution : resolution - 1);
      for (std::size_t i = 0; i < resolution; ++i) {
        const double u = lo + (hi - lo) * static_cast<double>(i) / denom;
        double x = d.log_scale ? std::pow(10.0, u) : u;
        if (i + 1 == resolution && !d.upper_open) x = d.hi;
        if (i == 0) x = d.lo;
        l.push_back(x);
      }
    }
    levels.push_back(std::move(l));
  }
  return levels;
}

Incumbent grid_oracle(const Benchmark& b, std::size_t resolution, bool parallel) {
  return grid_oracle(b, grid_levels(b.space, resolution), parallel);
}

Incumbent grid_oracle(const Benchmark& b, const std::vector<std::vector<double>>& levels, bool parallel) {
  if (levels.size() != b.space.size()) throw std::invalid_argument("one lattice axis per variable required");
  const std::size_t total = kernels::lattice_size(levels);
  if (total > kMaxGridPoints) {
    throw std::invalid_argument("grid of " + std::to_string(total) + " points exceeds the limit of " +
                                std::to_string(kMaxGridPoints));
  }
  const auto r = parallel ? kernels::grid_argmin_parallel(levels, b.dense)
                          : kernels::grid_argmin_serial(levels, b.dense);
  return {b.from_dense(r.point), r.value};
}

double random_search_best(const Benchmark& b, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : sample_uniform(b.space, rng, n)) best = std::min(best, b(a));
  return best;
}

}  // namespace blockopt
