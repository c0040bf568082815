#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blockopt/block.hpp"
#include "blockopt/json_io.hpp"
#include "blockopt/objective.hpp"

namespace blockopt {

class PlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Node of an execution plan. Conditioning nodes hold either one shared
/// child template or one template per label (`arm_labels` parallel to
/// `children`); alternating nodes hold exactly two children, y then z.
struct PlanNode {
  enum class Type { joint, conditioning, alternating };

  Type type = Type::joint;
  std::vector<std::string> vars;  // joint
  std::string cond_var;           // conditioning
  std::vector<double> cutpoints;  // conditioning on a numeric variable
  std::vector<std::string> arm_labels;
  std::vector<PlanNode> children;

  static PlanNode joint(std::vector<std::string> vars);
  static PlanNode conditioning(std::string var, PlanNode child, std::vector<double> cutpoints = {});
  static PlanNode alternating(PlanNode y, PlanNode z);

  bool operator==(const PlanNode&) const = default;
};

/// Variables claimed by the subtree, in first-claimed order.
std::vector<std::string> claimed_vars(const PlanNode& node);

struct PlanParams {
  std::size_t rounds = 5;  // "L"
  std::size_t n_init = 3;
  std::size_t candidate_pool = 1024;
  std::size_t window = 10;  // "w"
  double beta = 1.0;
  std::uint64_t seed = 1;
  double budget = 100.0;
  BudgetMode budget_mode = BudgetMode::count;

  bool operator==(const PlanParams&) const = default;
};

struct PlanConfig {
  SearchSpace space;
  PlanNode plan;
  PlanParams params;

  bool operator==(const PlanConfig&) const = default;
};

json to_json(const PlanNode& node);
PlanNode plan_node_from_json(const json& j);
json to_json(const PlanParams& p);
PlanParams plan_params_from_json(const json& j);
json to_json(const PlanConfig& cfg);
PlanConfig plan_config_from_json(const json& j);

PlanConfig load_plan_config(const std::string& path);
void save_plan_config(const PlanConfig& cfg, const std::string& path);

/// Checks that the tree exactly covers the space's variables. Throws
/// PlanError ("uncovered variable", "claimed twice", ...).
void validate_plan(const PlanConfig& cfg);

BlockParams block_params(const PlanParams& p);

/// Instantiates the block tree for `node` over `free_space`. Leaves are
/// seeded from `seed` in creation order.
std::unique_ptr<Block> build_block(const PlanNode& node, std::shared_ptr<const ObjectiveSpec> objective,
                                   const Subgoal& subgoal, const SearchSpace& free_space,
                                   std::shared_ptr<RunContext> context, const BlockParams& params,
                                   std::uint64_t seed);

/// Best-so-far after a trial.
struct Checkpoint {
  double spent = 0.0;
  double best = 0.0;
  Assignment assignment;
};

/// Drives the root block until the budget runs out.
class Executor {
 public:
  using TrialSink = std::function<void(const Trial&, const Checkpoint*)>;

  Executor(const PlanConfig& cfg, ObjectiveSpec objective);

  /// One root step. Returns no trials once the budget is spent.
  std::vector<Trial> step();
  void run();
  bool done() const { return context_->exhausted(); }

  /// Root's current best. Throws when nothing succeeded yet.
  Incumbent best() const;
  bool has_best() const { return root_->has_best(); }

  const std::vector<Checkpoint>& trajectory() const { return trajectory_; }
  const std::vector<Trial>& trials() const { return trials_; }
  const RunContext& context() const { return *context_; }
  double budget_spent() const { return context_->spent; }
  double budget_total() const { return context_->budget_total; }
  const Block& root() const { return *root_; }
  const PlanConfig& config() const { return cfg_; }

  /// Called after every trial, with the checkpoint once an incumbent exists.
  void set_trial_sink(TrialSink sink) { sink_ = std::move(sink); }

 private:
  PlanConfig cfg_;
  std::shared_ptr<const ObjectiveSpec> objective_;
  std::shared_ptr<RunContext> context_;
  std::unique_ptr<Block> root_;
  std::vector<Trial> trials_;
  std::vector<Checkpoint> trajectory_;
  std::optional<std::size_t> running_best_;
  double log_spent_ = 0.0;
  TrialSink sink_;
};

std::unique_ptr<Executor> build(const PlanConfig& cfg, ObjectiveSpec objective);

struct RunResult {
  std::optional<Incumbent> best;
  std::vector<Checkpoint> trajectory;
  std::size_t trials = 0;
};

RunResult run(Executor& e);

/// Roles of the variables of a CASH-style space.
struct Annotations {
  std::string algorithm_var;
  std::vector<std::string> feature_vars;
  std::vector<std::string> hp_vars;
};

json to_json(const Annotations& a);
Annotations annotations_from_json(const json& j);

struct NamedPlan {
  std::string name;
  PlanConfig config;
};

/// The five coarse plan shapes, in order:
///   joint                     one joint block over everything
///   conditioning              condition on the algorithm, joint children
///   conditioning_alternating  condition on the algorithm, then alternate
///                             feature vs hyper-parameter joint blocks
///   alternating_hp_alg        alternate features vs (hyper-parameters + algorithm)
///   alternating_fe_alg        alternate (features + algorithm) vs hyper-parameters
std::vector<NamedPlan> enumerate_coarse_plans(const SearchSpace& space, const Annotations& annotations,
                                              const PlanParams& params = {});

}  // namespace blockopt
