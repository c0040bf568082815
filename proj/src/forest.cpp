#include "blockopt/forest.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace blockopt {

namespace {

double sse(double sum, double sq, std::size_t n) {
  if (n == 0) return 0.0;
  return std::max(0.0, sq - sum * sum / static_cast<double>(n));
}

}  // namespace

struct RegressionTree::Columns {
  std::vector<double> values;  // feature-major: values[f * rows + i]
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<const double> y;
  std::size_t min_samples_split = 2;

  const double* feature(std::size_t f) const { return values.data() + f * rows; }
};

void RegressionTree::fit(const Matrix& x, std::span<const double> y, std::size_t min_samples_split,
                         Rng& rng) {
  if (x.rows() == 0 || x.rows() != y.size()) throw std::invalid_argument("tree fit: bad training data");
  Columns data;
  data.rows = x.rows();
  data.cols = x.cols();
  data.values.resize(data.rows * data.cols);
  for (std::size_t i = 0; i < data.rows; ++i) {
    const auto row = x.row(i);
    for (std::size_t f = 0; f < data.cols; ++f) data.values[f * data.rows + i] = row[f];
  }
  data.y = y;
  data.min_samples_split = std::max<std::size_t>(min_samples_split, 2);

  nodes_.clear();
  std::vector<std::size_t> idx(x.rows());
  std::iota(idx.begin(), idx.end(), 0);
  grow(data, idx, 0, idx.size(), rng);
}

int RegressionTree::grow(const Columns& data, std::vector<std::size_t>& idx, std::size_t begin,
                         std::size_t end, Rng& rng) {
  const auto y = data.y;
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  const std::size_t n = end - begin;
  double total = 0.0;
  double total_sq = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    total += y[idx[k]];
    total_sq += y[idx[k]] * y[idx[k]];
  }
  nodes_[id].value = total / static_cast<double>(n);
  if (n < data.min_samples_split) return id;

  int best_feature = -1;
  double best_threshold = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < data.cols; ++f) {
    const double* col = data.feature(f);
    double lo = col[idx[begin]];
    double hi = lo;
    for (std::size_t k = begin + 1; k < end; ++k) {
      const double v = col[idx[k]];
      lo = v < lo ? v : lo;
      hi = v > hi ? v : hi;
    }
    if (!(lo < hi)) continue;
    std::uniform_real_distribution<double> u(lo, hi);
    double t = u(rng);
    if (t >= hi) t = lo;
    double left = 0.0;
    double left_sq = 0.0;
    std::size_t left_n = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = idx[k];
      const double m = col[i] <= t ? 1.0 : 0.0;
      left += m * y[i];
      left_sq += m * y[i] * y[i];
      left_n += static_cast<std::size_t>(m);
    }
    const double score = sse(left, left_sq, left_n) + sse(total - left, total_sq - left_sq, n - left_n);
    if (score < best_score) {
      best_score = score;
      best_feature = static_cast<int>(f);
      best_threshold = t;
    }
  }
  if (best_feature < 0) return id;

  const double* col = data.feature(static_cast<std::size_t>(best_feature));
  auto mid = std::stable_partition(idx.begin() + begin, idx.begin() + end,
                                   [&](std::size_t i) { return col[i] <= best_threshold; });
  const auto split = static_cast<std::size_t>(mid - idx.begin());
  const int left = grow(data, idx, begin, split, rng);
  const int right = grow(data, idx, split, end, rng);
  nodes_[id].feature = best_feature;
  nodes_[id].threshold = best_threshold;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double RegressionTree::predict(std::span<const double> features) const {
  int k = 0;
  while (nodes_[k].feature >= 0) {
    const auto& node = nodes_[k];
    k = features[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes_[k].value;
}

RandomForest::RandomForest(ForestConfig cfg) : cfg_(cfg) {
  if (cfg_.num_trees == 0) throw std::invalid_argument("forest needs at least one tree");
}

void RandomForest::fit(const Matrix& x, std::span<const double> y, Rng& rng, bool parallel) {
  std::vector<std::uint64_t> seeds(cfg_.num_trees);
  for (auto& s : seeds) s = rng();
  std::vector<RegressionTree> trees(cfg_.num_trees);
  const auto count = static_cast<std::ptrdiff_t>(trees.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    Rng tree_rng(seeds[static_cast<std::size_t>(t)]);
    trees[static_cast<std::size_t>(t)].fit(x, y, cfg_.min_samples_split, tree_rng);
  }
  trees_ = std::move(trees);
  width_ = x.cols();
}

Prediction RandomForest::predict(std::span<const double> features) const {
  if (!trained()) throw std::logic_error("surrogate is not trained");
  std::vector<double> votes(trees_.size());
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < trees_.size(); ++i) {
    votes[i] = trees_[i].predict(features);
    sum += votes[i];
    lo = std::min(lo, votes[i]);
    hi = std::max(hi, votes[i]);
  }
  // unanimous trees: exact mean, zero variance
  if (lo == hi) return {lo, 0.0};
  const double n = static_cast<double>(trees_.size());
  const double mean = sum / n;
  double var = 0.0;
  for (const double v : votes) var += (v - mean) * (v - mean);
  return {mean, var / n};
}

}  // namespace blockopt
