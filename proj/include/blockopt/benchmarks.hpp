#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockopt/block.hpp"
#include "blockopt/kernels.hpp"
#include "blockopt/objective.hpp"
#include "blockopt/plan.hpp"

namespace blockopt {

double branin(double x1, double x2);
double hartmann6(std::span<const double> x);

/// Synthetic objective with a pure evaluator. The dense form takes one
/// coordinate per variable in canonical order, categoricals as label index.
struct Benchmark {
  std::string name;
  SearchSpace space;
  kernels::DenseFn dense;
  std::optional<double> known_best;  // only ever filled from grid_oracle
  std::optional<Annotations> annotations;

  std::vector<double> to_dense(const Assignment& a) const;
  Assignment from_dense(std::span<const double> x) const;
  double operator()(const Assignment& a) const;
};

/// "branin", "hartmann6", "separable20", "cash3".
std::vector<std::string> benchmark_names();
Benchmark load_benchmark(const std::string& name);

ObjectiveSpec benchmark_objective(const Benchmark& b, BudgetMode mode = BudgetMode::count);

inline constexpr std::size_t kMaxGridPoints = 100'000'000;

/// Per-variable lattice: all labels for categoricals, `resolution` evenly
/// spaced points for numeric variables (endpoints included, log-spaced when
/// log-scaled, distinct lattice integers for integer domains).
std::vector<std::vector<double>> grid_levels(const SearchSpace& space, std::size_t resolution);

/// Exhaustive argmin over the lattice. Throws when the lattice exceeds
/// kMaxGridPoints.
Incumbent grid_oracle(const Benchmark& b, std::size_t resolution, bool parallel = true);
Incumbent grid_oracle(const Benchmark& b, const std::vector<std::vector<double>>& levels,
                      bool parallel = true);

/// Best value of n uniform samples drawn with the given seed.
double random_search_best(const Benchmark& b, std::size_t n, std::uint64_t seed);

}  // namespace blockopt
