#include "blockopt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blockopt/acquisition.hpp"

namespace blockopt::kernels {

void predict_serial(const RandomForest& forest, const Matrix& x, std::span<Prediction> out) {
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = forest.predict(x.row(i));
}

void predict_parallel(const RandomForest& forest, const Matrix& x, std::span<Prediction> out) {
  if (!forest.trained()) throw std::logic_error("surrogate is not trained");
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = forest.predict(x.row(i));
}

void ei_scores_serial(const RandomForest& forest, const Matrix& x, double best, std::span<double> out) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto p = forest.predict(x.row(i));
    out[i] = expected_improvement(p.mean, std::sqrt(p.variance), best);
  }
}

void ei_scores_parallel(const RandomForest& forest, const Matrix& x, double best, std::span<double> out) {
  if (!forest.trained()) throw std::logic_error("surrogate is not trained");
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto p = forest.predict(x.row(i));
    out[i] = expected_improvement(p.mean, std::sqrt(p.variance), best);
  }
}

std::size_t argmax_first(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax of empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::size_t lattice_size(const std::vector<std::vector<double>>& levels) {
  std::size_t total = 1;
  for (const auto& l : levels) {
    if (l.empty()) return 0;
    if (total > std::numeric_limits<std::size_t>::max() / l.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= l.size();
  }
  return total;
}

namespace {

void decode(const std::vector<std::vector<double>>& levels, std::size_t index, std::vector<double>& point) {
  for (std::size_t d = levels.size(); d-- > 0;) {
    const std::size_t n = levels[d].size();
    point[d] = levels[d][index % n];
    index /= n;
  }
}

// Visits [begin, end) and keeps the first strict minimum.
void scan(const std::vector<std::vector<double>>& levels, const DenseFn& f, std::size_t begin,
          std::size_t end, double& best_value, std::size_t& best_index) {
  std::vector<double> point(levels.size());
  for (std::size_t i = begin; i < end; ++i) {
    decode(levels, i, point);
    const double v = f(point);
    if (v < best_value) {
      best_value = v;
      best_index = i;
    }
  }
}

GridResult finish(const std::vector<std::vector<double>>& levels, double value, std::size_t index) {
  if (!std::isfinite(value)) throw std::runtime_error("grid scan found no finite value");
  GridResult r;
  r.point.resize(levels.size());
  decode(levels, index, r.point);
  r.value = value;
  r.index = index;
  return r;
}

}  // namespace

GridResult grid_argmin_serial(const std::vector<std::vector<double>>& levels, const DenseFn& f) {
  const std::size_t total = lattice_size(levels);
  if (total == 0) throw std::invalid_argument("empty lattice");
  double best = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  scan(levels, f, 0, total, best, index);
  return finish(levels, best, index);
}

GridResult grid_argmin_parallel(const std::vector<std::vector<double>>& levels, const DenseFn& f) {
  const std::size_t total = lattice_size(levels);
  if (total == 0) throw std::invalid_argument("empty lattice");
  double best = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
#pragma omp parallel
  {
    double local_best = std::numeric_limits<double>::infinity();
    std::size_t local_index = total;
    const auto n = static_cast<std::ptrdiff_t>(total);
    constexpr std::ptrdiff_t kChunk = 4096;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t c = 0; c < n; c += kChunk) {
      scan(levels, f, static_cast<std::size_t>(c), static_cast<std::size_t>(std::min(c + kChunk, n)),
           local_best, local_index);
    }
#pragma omp critical
    {
      if (local_best < best || (local_best == best && local_index < index)) {
        best = local_best;
        index = local_index;
      }
    }
  }
  return finish(levels, best, index);
}

}  // namespace blockopt::kernels
