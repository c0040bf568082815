#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "blockopt/search_space.hpp"

namespace blockopt {

/// Dense row-major feature matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct ForestConfig {
  std::size_t num_trees = 25;
  std::size_t min_samples_split = 3;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Regression tree grown with random thresholds: at each node every feature
/// draws one threshold uniformly between the node's min and max, and the
/// draw with the lowest summed squared error wins.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  void fit(const Matrix& x, std::span<const double> y, std::size_t min_samples_split, Rng& rng);
  double predict(std::span<const double> features) const;
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  struct Columns;
  int grow(const Columns& data, std::vector<std::size_t>& idx, std::size_t begin, std::size_t end, Rng& rng);

  std::vector<Node> nodes_;
};

/// Ensemble surrogate. Mean and variance are taken across the trees'
/// predictions.
class RandomForest {
 public:
  explicit RandomForest(ForestConfig cfg = {});

  /// Draws one seed per tree from `rng`, then grows every tree from its own
  /// stream, so the serial and parallel paths build identical forests.
  void fit(const Matrix& x, std::span<const double> y, Rng& rng, bool parallel = false);
  bool trained() const { return !trees_.empty(); }
  std::size_t width() const { return width_; }
  const ForestConfig& config() const { return cfg_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

  /// Throws std::logic_error when untrained.
  Prediction predict(std::span<const double> features) const;

 private:
  ForestConfig cfg_;
  std::size_t width_ = 0;
  std::vector<RegressionTree> trees_;
};

}  // namespace blockopt
