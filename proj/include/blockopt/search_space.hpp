#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace blockopt {

/// Raised for malformed spaces, assignments and subgoals.
class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Rng = std::mt19937_64;

struct ContinuousDomain {
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;
  // true for the lower pieces produced by split_numeric: [lo, hi)
  bool upper_open = false;

  bool operator==(const ContinuousDomain&) const = default;
};

struct IntegerDomain {
  std::int64_t lo = 0;
  std::int64_t hi = 1;
  bool upper_open = false;

  std::int64_t last() const { return upper_open ? hi - 1 : hi; }
  std::int64_t count() const { return last() - lo + 1; }

  bool operator==(const IntegerDomain&) const = default;
};

struct CategoricalDomain {
  std::vector<std::string> labels;

  bool operator==(const CategoricalDomain&) const = default;
};

/// A variable's domain. Construct through the factory functions, which
/// check the invariants.
class Domain {
 public:
  using Kind = std::variant<ContinuousDomain, IntegerDomain, CategoricalDomain>;

  static Domain continuous(double lo, double hi, bool log_scale = false,
                           bool upper_open = false);
  static Domain integer(std::int64_t lo, std::int64_t hi, bool upper_open = false);
  static Domain categorical(std::vector<std::string> labels);

  const Kind& kind() const { return kind_; }
  bool is_continuous() const { return std::holds_alternative<ContinuousDomain>(kind_); }
  bool is_integer() const { return std::holds_alternative<IntegerDomain>(kind_); }
  bool is_categorical() const { return std::holds_alternative<CategoricalDomain>(kind_); }
  bool is_numeric() const { return !is_categorical(); }

  const ContinuousDomain& as_continuous() const { return std::get<ContinuousDomain>(kind_); }
  const IntegerDomain& as_integer() const { return std::get<IntegerDomain>(kind_); }
  const CategoricalDomain& as_categorical() const { return std::get<CategoricalDomain>(kind_); }

  bool operator==(const Domain&) const = default;

 private:
  explicit Domain(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// A bound value: real for continuous, integer for integer domains, label
/// for categoricals.
using Value = std::variant<double, std::int64_t, std::string>;

std::string to_string(const Value& v);

struct Variable {
  std::string name;
  Domain domain;

  bool operator==(const Variable&) const = default;
};

/// Partial or full map from variable name to value.
using Assignment = std::map<std::string, Value>;

/// Ordered list of uniquely named variables. Declaration order is the
/// canonical order for iteration, encoding and random draws.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<Variable> variables);

  const std::vector<Variable>& variables() const { return variables_; }
  std::size_t size() const { return variables_.size(); }
  bool empty() const { return variables_.empty(); }

  bool contains(const std::string& name) const;
  const Variable& at(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Same variables, with `name`'s domain replaced.
  SearchSpace with_domain(const std::string& name, Domain domain) const;
  /// The variables whose names appear in `names`, kept in canonical order.
  SearchSpace project(std::span<const std::string> names) const;

  bool operator==(const SearchSpace&) const = default;

 private:
  std::vector<Variable> variables_;
};

bool contains_value(const Domain& d, const Value& v);

/// Throws SpaceError unless every binding names a variable of `space` with a
/// value inside its domain.
void validate(const SearchSpace& space, const Assignment& a);
/// validate() plus: every variable of `space` is bound.
void validate_full(const SearchSpace& space, const Assignment& a);
bool is_full(const SearchSpace& space, const Assignment& a);

/// Variables fixed to constants; the remainder of the parent space stays free.
struct Subgoal {
  Assignment fixed;

  std::vector<std::string> fixed_vars() const;
};

/// The reduced space over the subgoal's free variables.
SearchSpace substitute(const SearchSpace& space, const Subgoal& subgoal);

/// Disjoint union of two partial assignments; overlapping keys throw.
Assignment merge(const Assignment& a, const Assignment& b);

/// Restriction of `a` to the given names (missing names are skipped).
Assignment restrict_to(const Assignment& a, std::span<const std::string> names);

Value sample_value(const Domain& d, Rng& rng);

/// Flat coordinate form: one double per variable in canonical order, the
/// label index for categoricals. sample_coord draws from the same stream as
/// sample_value.
double sample_coord(const Domain& d, Rng& rng);
double coord_of(const Domain& d, const Value& v);
Value value_from_coord(const Domain& d, double x);
std::vector<double> to_coords(const SearchSpace& space, const Assignment& a);
Assignment from_coords(const SearchSpace& space, std::span<const double> coords);
std::vector<Assignment> sample_uniform(const SearchSpace& space, Rng& rng, std::size_t n);

/// Splits a numeric domain into contiguous pieces at the given cutpoints.
/// Every piece except the last is upper-open.
std::vector<Domain> split_numeric(const Variable& var, std::span<const double> cutpoints);

/// Midpoint for numeric domains (log-space midpoint when log-scaled), first
/// label for categoricals.
Value default_value(const Domain& d);
Assignment default_assignment(const SearchSpace& space);

/// Numeric value as double; throws for labels.
double numeric_value(const Value& v);

/// Width of the encoded feature vector (one-hot for categoricals).
std::size_t encoded_width(const SearchSpace& space);
/// Encodes the space's variables of `a` into [0,1] features. Log-scaled
/// variables are encoded in log10 space.
void encode(const SearchSpace& space, const Assignment& a, std::span<double> out);
void encode_coords(const SearchSpace& space, std::span<const double> coords, std::span<double> out);

}  // namespace blockopt
