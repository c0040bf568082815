#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "blockopt/block.hpp"
#include "blockopt/objective.hpp"

namespace blockopt {

/// Incumbent improvement per ok trial, in utility units: 0 for the first ok
/// trial, then best_{t-1} - best_t.
std::vector<double> incumbent_improvements(const History& h);

/// Expected utility after `budget` more units, bracketed by extrapolating
/// the recent incumbent improvements:
///   lower = u*,  upper = u* + k (mean + beta * stddev)
/// where u* is the best utility, the statistics cover the last `window`
/// improvements and k = floor(budget / ema_cost) further steps.
/// Fewer than two ok trials give [u*, u*]. Throws without any ok trial.
EUBound get_eu_estimate(const History& h, const CostModel& cost, double budget,
                        std::size_t window = 10, double beta = 1.0);

/// Mean incumbent improvement per step after the first ok trial; 0 with a
/// single ok trial. Throws without any ok trial.
double get_eui_estimate(const History& h);

/// Arms i with u_i < l_j for some other arm j. The arm with the largest
/// upper bound always survives.
std::set<std::size_t> eliminate_dominated(const std::vector<EUBound>& bounds);

}  // namespace blockopt
