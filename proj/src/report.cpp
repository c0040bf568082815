#include "blockopt/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>

namespace blockopt {

json to_json(const Checkpoint& c) {
  return {{"spent", c.spent}, {"best", c.best}, {"assignment", to_json(c.assignment)}};
}

TrajectoryWriter::TrajectoryWriter(const std::string& path) : out_(path, std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open trajectory file '" + path + "'");
}

void TrajectoryWriter::write(const Checkpoint& c) {
  out_ << to_json(c).dump() << '\n';
  out_.flush();
}

std::string config_digest(const PlanConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const RunReport& r) {
  json traj = json::array();
  for (const auto& c : r.trajectory) traj.push_back(to_json(c));
  json out = {{"config_digest", r.config_digest},
              {"seed", r.seed},
              {"trials", r.trials},
              {"failed_trials", r.failed_trials},
              {"wall_time_s", r.wall_time_s},
              {"trajectory", std::move(traj)}};
  if (r.best) {
    out["final_best"] = {{"assignment", to_json(r.best->assignment)}, {"value", r.best->value}};
  } else {
    out["final_best"] = nullptr;
  }
  return out;
}

RunReport run_with_report(const PlanConfig& cfg, ObjectiveSpec objective,
                          const std::optional<std::string>& trajectory_path) {
  const auto start = std::chrono::steady_clock::now();
  Executor exec(cfg, std::move(objective));
  std::optional<TrajectoryWriter> writer;
  if (trajectory_path) {
    writer.emplace(*trajectory_path);
    exec.set_trial_sink([&](const Trial&, const Checkpoint* cp) {
      if (cp != nullptr) writer->write(*cp);
    });
  }
  exec.run();

  RunReport r;
  r.config_digest = config_digest(cfg);
  r.seed = cfg.params.seed;
  r.trajectory = exec.trajectory();
  if (exec.has_best()) r.best = exec.best();
  r.trials = exec.trials().size();
  r.failed_trials = static_cast<std::size_t>(
      std::count_if(exec.trials().begin(), exec.trials().end(), [](const Trial& t) { return !t.ok(); }));
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

CompareResult compare_plans(const std::vector<NamedPlan>& plans,
                            const std::function<ObjectiveSpec()>& make_objective,
                            const std::vector<std::uint64_t>& seeds,
                            const std::optional<std::string>& out_dir) {
  if (plans.empty() || seeds.empty()) throw std::invalid_argument("compare needs plans and seeds");
  if (out_dir) std::filesystem::create_directories(*out_dir);

  const std::size_t n = plans.size() * seeds.size();
  std::vector<CompareRow> rows(n);
  std::vector<std::string> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& plan = plans[static_cast<std::size_t>(k) / seeds.size()];
    const std::uint64_t seed = seeds[static_cast<std::size_t>(k) % seeds.size()];
    try {
      PlanConfig cfg = plan.config;
      cfg.params.seed = seed;
      std::optional<std::string> path;
      if (out_dir) {
        path = (std::filesystem::path(*out_dir) / (plan.name + "_seed" + std::to_string(seed) + ".jsonl")).string();
      }
      const auto report = run_with_report(cfg, make_objective(), path);
      rows[k] = {plan.name, seed,
                 report.best ? report.best->value : std::numeric_limits<double>::infinity(), report.trials};
    } catch (const std::exception& e) {
      errors[k] = plan.name + " seed " + std::to_string(seed) + ": " + e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error("compare run failed: " + e);
  }

  CompareResult result;
  result.rows = rows;
  std::vector<double> rank_sum(plans.size(), 0.0);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    std::vector<double> finals(plans.size());
    for (std::size_t p = 0; p < plans.size(); ++p) finals[p] = rows[p * seeds.size() + s].final_best;
    const auto ranks = average_ranks(finals);
    for (std::size_t p = 0; p < plans.size(); ++p) rank_sum[p] += ranks[p];
  }
  for (std::size_t p = 0; p < plans.size(); ++p) {
    result.mean_ranks.emplace_back(plans[p].name, rank_sum[p] / static_cast<double>(seeds.size()));
  }
  return result;
}

void write_summary_csv(const CompareResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.precision(17);
  out << "plan,seed,final_best,trials\n";
  for (const auto& row : r.rows) out << row.plan << ',' << row.seed << ',' << row.final_best << ',' << row.trials << '\n';
}

void write_rank_csv(const CompareResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "plan,mean_rank\n";
  for (const auto& [plan, rank] : r.mean_ranks) out << plan << ',' << rank << '\n';
}

}  // namespace blockopt
