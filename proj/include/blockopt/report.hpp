#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockopt/plan.hpp"

namespace blockopt {

/// {"spent": float, "best": float, "assignment": {...}}
json to_json(const Checkpoint& c);

/// Append-only JSONL trajectory file; every line is flushed on write so
/// the file parses line by line while a run is in progress.
class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(const std::string& path);
  void write(const Checkpoint& c);

 private:
  std::ofstream out_;
};

/// FNV-1a of the config's compact JSON form, as 16 hex digits.
std::string config_digest(const PlanConfig& cfg);

struct RunReport {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> trajectory;
  std::optional<Incumbent> best;
  std::size_t trials = 0;
  std::size_t failed_trials = 0;
  double wall_time_s = 0.0;
};

json to_json(const RunReport& r);

/// Runs one executor to completion, streaming checkpoints to
/// `trajectory_path` when given.
RunReport run_with_report(const PlanConfig& cfg, ObjectiveSpec objective,
                          const std::optional<std::string>& trajectory_path = std::nullopt);

struct CompareRow {
  std::string plan;
  std::uint64_t seed = 0;
  double final_best = 0.0;  // +inf when nothing succeeded
  std::size_t trials = 0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<std::pair<std::string, double>> mean_ranks;  // plan order
};

/// 1-based ranks of `values` (smaller is better); ties share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Runs every plan under every seed (seed overrides the plan's own) and
/// ranks the plans per seed by final best. `make_objective` is called once
/// per run. Runs execute concurrently when OpenMP is available; when
/// `out_dir` is set each run writes <plan>_seed<k>.jsonl there.
CompareResult compare_plans(const std::vector<NamedPlan>& plans,
                            const std::function<ObjectiveSpec()>& make_objective,
                            const std::vector<std::uint64_t>& seeds,
                            const std::optional<std::string>& out_dir = std::nullopt);

/// CSV with columns plan,seed,final_best,trials.
void write_summary_csv(const CompareResult& r, const std::string& path);
/// CSV with columns plan,mean_rank.
void write_rank_csv(const CompareResult& r, const std::string& path);

}  // namespace blockopt
