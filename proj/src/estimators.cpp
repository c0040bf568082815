#include "blockopt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockopt {

std::vector<double> incumbent_improvements(const History& h) {
  std::vector<double> out;
  double best = 0.0;
  for (const auto& t : h.trials()) {
    if (!t.ok()) continue;
    if (out.empty()) {
      out.push_back(0.0);
      best = t.value;
      continue;
    }
    const double next = std::min(best, t.value);
    out.push_back(best - next);
    best = next;
  }
  return out;
}

EUBound get_eu_estimate(const History& h, const CostModel& cost, double budget, std::size_t window,
                        double beta) {
  if (!h.has_best()) throw std::logic_error("get_eu: no successful trial");
  if (budget < 0.0) throw std::invalid_argument("get_eu: negative budget");
  const double u_star = -h.best_value();
  if (h.ok_count() < 2) return {u_star, u_star};

  const auto imp = incumbent_improvements(h);
  // the leading 0 belongs to the first trial, not to a step
  const std::size_t steps = imp.size() - 1;
  const std::size_t n = std::min(window, steps);
  if (n == 0) return {u_star, u_star};
  const auto first = imp.end() - static_cast<std::ptrdiff_t>(n);
  double mean = 0.0;
  for (auto it = first; it != imp.end(); ++it) mean += *it;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (auto it = first; it != imp.end(); ++it) var += (*it - mean) * (*it - mean);
  const double sd = std::sqrt(var / static_cast<double>(n));

  const double rate = mean + beta * sd;
  if (rate <= 0.0) return {u_star, u_star};
  constexpr double kMinCost = 1e-12;
  const double steps_left = std::floor(budget / std::max(cost.ema(), kMinCost));
  return {u_star, u_star + steps_left * rate};
}

double get_eui_estimate(const History& h) {
  if (!h.has_best()) throw std::logic_error("get_eui: no successful trial");
  const auto imp = incumbent_improvements(h);
  if (imp.size() < 2) return 0.0;
  // mean over steps; the leading 0 stands for the first trial, not a step
  double sum = 0.0;
  for (auto it = imp.begin() + 1; it != imp.end(); ++it) sum += *it;
  return sum / static_cast<double>(imp.size() - 1);
}

std::set<std::size_t> eliminate_dominated(const std::vector<EUBound>& bounds) {
  std::set<std::size_t> out;
  if (bounds.empty()) return out;
  double max_lower = bounds.front().lower;
  for (const auto& b : bounds) max_lower = std::max(max_lower, b.lower);
  // u_i < l_j for some j  <=>  u_i < max_j l_j, since u_i >= l_i excludes j = i
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i].upper < max_lower) out.insert(i);
  }
  return out;
}

}  // namespace blockopt
