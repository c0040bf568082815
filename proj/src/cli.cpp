#include "blockopt/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "blockopt/benchmarks.hpp"
#include "blockopt/plan.hpp"
#include "blockopt/report.hpp"
#include "blockopt/subprocess.hpp"

namespace blockopt {

namespace {

struct ObjectiveFlags {
  std::string benchmark;
  std::string command;
  std::string dataset;
  double timeout = 0.0;
};

struct ParamFlags {
  std::optional<double> budget;
  std::optional<std::string> budget_mode;
  std::optional<std::uint64_t> seed;

  void apply(PlanParams& p) const {
    if (budget) p.budget = *budget;
    if (budget_mode) p.budget_mode = parse_budget_mode(*budget_mode);
    if (seed) p.seed = *seed;
  }
};

void add_objective_flags(CLI::App* cmd, ObjectiveFlags& f) {
  auto* bench = cmd->add_option("--benchmark", f.benchmark, "Built-in benchmark name");
  auto* proc = cmd->add_option("--objective-cmd", f.command, "Command of a line-protocol objective process");
  bench->excludes(proc);
  cmd->add_option("--dataset", f.dataset, "Dataset path handed to the objective process");
  cmd->add_option("--timeout", f.timeout, "Seconds per evaluation (0 = unlimited)")->check(CLI::NonNegativeNumber);
}

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--budget", f.budget, "Budget in units of --budget-mode")->check(CLI::NonNegativeNumber);
  cmd->add_option("--budget-mode", f.budget_mode, "seconds | count")->check(CLI::IsMember({"seconds", "count"}));
  cmd->add_option("--seed", f.seed, "Random seed");
}

std::function<ObjectiveSpec()> objective_factory(const ObjectiveFlags& f, const SearchSpace& space) {
  const double timeout = f.timeout > 0 ? f.timeout : std::numeric_limits<double>::infinity();
  if (!f.benchmark.empty()) {
    const Benchmark b = load_benchmark(f.benchmark);
    if (!(b.space == space)) {
      throw std::invalid_argument("plan space does not match benchmark '" + f.benchmark + "'");
    }
    return [b, timeout] {
      auto spec = benchmark_objective(b);
      spec.timeout_s = timeout;
      return spec;
    };
  }
  if (f.command.empty()) throw std::invalid_argument("one of --benchmark or --objective-cmd is required");
  return [f, space, timeout] {
    ObjectiveSpec spec;
    spec.space = space;
    spec.evaluator = std::make_shared<SubprocessEvaluator>(f.command, f.dataset);
    spec.dataset_ref = f.dataset;
    spec.timeout_s = timeout;
    return spec;
  };
}

std::string plan_name(const std::string& path) { return std::filesystem::path(path).stem().string(); }

int cmd_run(const std::vector<std::string>& plans, const ObjectiveFlags& of, const ParamFlags& pf,
            const std::string& out_dir, std::ostream& out) {
  PlanConfig cfg = load_plan_config(plans.front());
  pf.apply(cfg.params);
  const auto make = objective_factory(of, cfg.space);
  std::filesystem::create_directories(out_dir);
  const auto traj = (std::filesystem::path(out_dir) / "trajectory.jsonl").string();
  const auto report = run_with_report(cfg, make(), traj);
  std::ofstream(std::filesystem::path(out_dir) / "report.json") << to_json(report).dump(2) << "\n";

  out << "trials: " << report.trials << " (failed " << report.failed_trials << ")\n";
  if (report.best) {
    out << "best: " << std::setprecision(10) << report.best->value << " at "
        << to_json(report.best->assignment).dump() << "\n";
  } else {
    out << "best: none\n";
  }
  return 0;
}

int cmd_compare(const std::vector<std::string>& paths, const ObjectiveFlags& of, const ParamFlags& pf,
                std::size_t num_seeds, const std::string& out_dir, std::ostream& out) {
  std::vector<NamedPlan> plans;
  for (const auto& p : paths) {
    PlanConfig cfg = load_plan_config(p);
    pf.apply(cfg.params);
    plans.push_back({plan_name(p), std::move(cfg)});
  }
  for (const auto& p : plans) {
    if (!(p.config.space == plans.front().config.space)) {
      throw std::invalid_argument("all compared plans must share one search space");
    }
  }
  const auto make = objective_factory(of, plans.front().config.space);
  std::vector<std::uint64_t> seeds;
  const std::uint64_t first = pf.seed.value_or(1);
  for (std::size_t i = 0; i < num_seeds; ++i) seeds.push_back(first + i);

  const auto result = compare_plans(plans, make, seeds, out_dir);
  write_summary_csv(result, (std::filesystem::path(out_dir) / "summary.csv").string());
  write_rank_csv(result, (std::filesystem::path(out_dir) / "ranks.csv").string());

  out << std::left << std::setw(28) << "plan" << "mean_rank\n";
  for (const auto& [name, rank] : result.mean_ranks) {
    out << std::left << std::setw(28) << name << std::fixed << std::setprecision(2) << rank << "\n";
  }
  return 0;
}

int cmd_enumerate(const std::string& benchmark, const std::string& space_path, const ParamFlags& pf,
                  const std::string& out_dir, std::ostream& out) {
  SearchSpace space;
  Annotations annotations;
  if (!benchmark.empty()) {
    const auto b = load_benchmark(benchmark);
    if (!b.annotations) throw std::invalid_argument("benchmark '" + benchmark + "' has no annotations");
    space = b.space;
    annotations = *b.annotations;
  } else {
    std::ifstream in(space_path);
    if (!in) throw std::invalid_argument("cannot open '" + space_path + "'");
    const json j = json::parse(in);
    space = space_from_json(j.at("space"));
    annotations = annotations_from_json(j.at("annotations"));
  }
  PlanParams params;
  pf.apply(params);
  const auto plans = enumerate_coarse_plans(space, annotations, params);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  for (const auto& p : plans) {
    out << p.name << ": " << to_json(p.config.plan).dump() << "\n";
    if (!out_dir.empty()) save_plan_config(p.config, (std::filesystem::path(out_dir) / (p.name + ".json")).string());
  }
  return 0;
}

int cmd_oracle(const std::string& benchmark, std::size_t resolution, std::ostream& out) {
  const auto b = load_benchmark(benchmark);
  const auto best = grid_oracle(b, resolution);
  out << json{{"benchmark", benchmark}, {"resolution", resolution}, {"value", best.value},
              {"assignment", to_json(best.assignment)}}.dump()
      << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical black-box optimization: plans of joint, conditioning and alternating blocks"};
  app.name("blockopt");
  app.require_subcommand(1);

  std::vector<std::string> plans;
  ObjectiveFlags of;
  ParamFlags pf;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run one plan on one objective");
  run->add_option("--plan", plans, "Plan config (JSON)")->required()->expected(1);
  add_objective_flags(run, of);
  add_param_flags(run, pf);
  run->add_option("--out", out_dir, "Output directory")->default_val("out");

  std::size_t num_seeds = 10;
  auto* compare = app.add_subcommand("compare", "Run several plans over several seeds and rank them");
  compare->add_option("--plan", plans, "Plan configs (repeatable)")->required()->expected(1, -1);
  add_objective_flags(compare, of);
  add_param_flags(compare, pf);
  compare->add_option("--seeds", num_seeds, "Number of seeds, counting up from --seed")->default_val(10);
  compare->add_option("--out", out_dir, "Output directory")->default_val("compare_out");

  std::string benchmark;
  std::string space_path;
  auto* enumerate = app.add_subcommand("enumerate", "Print the five coarse plans of an annotated space");
  auto* eb = enumerate->add_option("--benchmark", benchmark, "Built-in benchmark with annotations");
  auto* es = enumerate->add_option("--space", space_path, "JSON with 'space' and 'annotations'");
  eb->excludes(es);
  add_param_flags(enumerate, pf);
  enumerate->add_option("--out", out_dir, "Write one plan config per shape into this directory");

  std::size_t resolution = 100;
  auto* oracle = app.add_subcommand("oracle", "Grid-search a benchmark for its minimum");
  oracle->add_option("--benchmark", benchmark, "Built-in benchmark name")->required();
  oracle->add_option("--resolution", resolution, "Points per numeric dimension")->default_val(100);

  std::vector<std::string> argv_store = {"blockopt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (run->parsed()) {
      if (of.benchmark.empty() && of.command.empty()) {
        err << "run: one of --benchmark or --objective-cmd is required\n\n" << run->help();
        return 2;
      }
      return cmd_run(plans, of, pf, out_dir, out);
    }
    if (compare->parsed()) {
      if (of.benchmark.empty() && of.command.empty()) {
        err << "compare: one of --benchmark or --objective-cmd is required\n\n" << compare->help();
        return 2;
      }
      return cmd_compare(plans, of, pf, num_seeds, out_dir, out);
    }
    if (enumerate->parsed()) {
      if (benchmark.empty() && space_path.empty()) {
        err << "enumerate: one of --benchmark or --space is required\n\n" << enumerate->help();
        return 2;
      }
      return cmd_enumerate(benchmark, space_path, pf, out_dir, out);
    }
    if (oracle->parsed()) return cmd_oracle(benchmark, resolution, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace blockopt
