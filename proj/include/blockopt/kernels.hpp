#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "blockopt/forest.hpp"

/// Data-parallel hot loops. Every kernel has a serial reference and an
/// OpenMP version; both produce bit-identical results for any thread count.
namespace blockopt::kernels {

void predict_serial(const RandomForest& forest, const Matrix& x, std::span<Prediction> out);
void predict_parallel(const RandomForest& forest, const Matrix& x, std::span<Prediction> out);

/// EI of every row of `x` against the incumbent value `best`.
void ei_scores_serial(const RandomForest& forest, const Matrix& x, double best, std::span<double> out);
void ei_scores_parallel(const RandomForest& forest, const Matrix& x, double best, std::span<double> out);

/// Index of the first maximal element. Empty input throws.
std::size_t argmax_first(std::span<const double> scores);

/// Objective over a dense coordinate vector (categoricals as label index).
using DenseFn = std::function<double(std::span<const double>)>;

struct GridResult {
  std::vector<double> point;
  double value = 0.0;
  std::size_t index = 0;
};

/// Number of points in the cartesian product of `levels`, saturating at
/// SIZE_MAX.
std::size_t lattice_size(const std::vector<std::vector<double>>& levels);

/// Exhaustive argmin over the cartesian lattice. The first dimension varies
/// slowest; ties go to the lowest lattice index.
GridResult grid_argmin_serial(const std::vector<std::vector<double>>& levels, const DenseFn& f);
GridResult grid_argmin_parallel(const std::vector<std::vector<double>>& levels, const DenseFn& f);

}  // namespace blockopt::kernels
