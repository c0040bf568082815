#include "blockopt/plan.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "blockopt/bandit_blocks.hpp"
#include "blockopt/joint_block.hpp"

namespace blockopt {

PlanNode PlanNode::joint(std::vector<std::string> vars) {
  PlanNode n;
  n.type = Type::joint;
  n.vars = std::move(vars);
  return n;
}

PlanNode PlanNode::conditioning(std::string var, PlanNode child, std::vector<double> cutpoints) {
  PlanNode n;
  n.type = Type::conditioning;
  n.cond_var = std::move(var);
  n.cutpoints = std::move(cutpoints);
  n.children.push_back(std::move(child));
  return n;
}

PlanNode PlanNode::alternating(PlanNode y, PlanNode z) {
  PlanNode n;
  n.type = Type::alternating;
  n.children.push_back(std::move(y));
  n.children.push_back(std::move(z));
  return n;
}

namespace {

void collect_claims(const PlanNode& node, std::vector<std::string>& out) {
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (node.type) {
    case PlanNode::Type::joint:
      for (const auto& v : node.vars) add(v);
      break;
    case PlanNode::Type::conditioning:
      add(node.cond_var);
      for (const auto& c : node.children) collect_claims(c, out);
      break;
    case PlanNode::Type::alternating:
      for (const auto& c : node.children) collect_claims(c, out);
      break;
  }
}

const char* type_name(PlanNode::Type t) {
  switch (t) {
    case PlanNode::Type::joint:
      return "joint";
    case PlanNode::Type::conditioning:
      return "conditioning";
    case PlanNode::Type::alternating:
      return "alternating";
  }
  return "?";
}

}  // namespace

std::vector<std::string> claimed_vars(const PlanNode& node) {
  std::vector<std::string> out;
  collect_claims(node, out);
  return out;
}

json to_json(const PlanNode& node) {
  json j = {{"type", type_name(node.type)}};
  switch (node.type) {
    case PlanNode::Type::joint:
      j["vars"] = node.vars;
      break;
    case PlanNode::Type::conditioning:
      j["var"] = node.cond_var;
      if (!node.cutpoints.empty()) j["cutpoints"] = node.cutpoints;
      if (node.arm_labels.empty()) {
        j["child"] = to_json(node.children.at(0));
      } else {
        json children = json::object();
        for (std::size_t i = 0; i < node.arm_labels.size(); ++i) {
          children[node.arm_labels[i]] = to_json(node.children.at(i));
        }
        j["children"] = std::move(children);
      }
      break;
    case PlanNode::Type::alternating:
      j["y"] = to_json(node.children.at(0));
      j["z"] = to_json(node.children.at(1));
      break;
  }
  return j;
}

PlanNode plan_node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw PlanError("plan node must be an object with 'type'");
  const auto type = j.at("type").get<std::string>();
  if (type == "joint") {
    if (!j.contains("vars")) throw PlanError("joint node needs 'vars'");
    return PlanNode::joint(j.at("vars").get<std::vector<std::string>>());
  }
  if (type == "conditioning") {
    if (!j.contains("var")) throw PlanError("conditioning node needs 'var'");
    PlanNode n;
    n.type = PlanNode::Type::conditioning;
    n.cond_var = j.at("var").get<std::string>();
    if (j.contains("cutpoints")) n.cutpoints = j.at("cutpoints").get<std::vector<double>>();
    const bool shared = j.contains("child");
    const bool per_arm = j.contains("children");
    if (shared == per_arm) throw PlanError("conditioning node needs exactly one of 'child' or 'children'");
    if (shared) {
      n.children.push_back(plan_node_from_json(j.at("child")));
    } else {
      if (!j.at("children").is_object()) throw PlanError("'children' must map labels to nodes");
      for (const auto& [label, child] : j.at("children").items()) {
        n.arm_labels.push_back(label);
        n.children.push_back(plan_node_from_json(child));
      }
    }
    return n;
  }
  if (type == "alternating") {
    if (!j.contains("y") || !j.contains("z")) throw PlanError("alternating node needs 'y' and 'z'");
    return PlanNode::alternating(plan_node_from_json(j.at("y")), plan_node_from_json(j.at("z")));
  }
  throw PlanError("unknown node type '" + type + "'");
}

json to_json(const PlanParams& p) {
  return {{"L", p.rounds},       {"n_init", p.n_init}, {"candidate_pool", p.candidate_pool},
          {"w", p.window},       {"beta", p.beta},     {"seed", p.seed},
          {"budget", p.budget},  {"budget_mode", to_string(p.budget_mode)}};
}

PlanParams plan_params_from_json(const json& j) {
  PlanParams p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw PlanError("'params' must be an object");
  static const std::set<std::string> known = {"L",    "n_init", "candidate_pool", "w",
                                              "beta", "seed",   "budget",         "budget_mode"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw PlanError("unknown parameter '" + key + "'");
  }
  p.rounds = j.value("L", p.rounds);
  p.n_init = j.value("n_init", p.n_init);
  p.candidate_pool = j.value("candidate_pool", p.candidate_pool);
  p.window = j.value("w", p.window);
  p.beta = j.value("beta", p.beta);
  p.seed = j.value("seed", p.seed);
  p.budget = j.value("budget", p.budget);
  if (j.contains("budget_mode")) p.budget_mode = parse_budget_mode(j.at("budget_mode").get<std::string>());
  if (p.rounds == 0) throw PlanError("L must be >= 1");
  if (p.n_init == 0) throw PlanError("n_init must be >= 1");
  if (p.candidate_pool == 0) throw PlanError("candidate_pool must be >= 1");
  if (p.window == 0) throw PlanError("w must be >= 1");
  if (!(p.budget >= 0.0)) throw PlanError("budget must be >= 0");
  return p;
}

json to_json(const PlanConfig& cfg) {
  return {{"space", to_json(cfg.space)}, {"plan", to_json(cfg.plan)}, {"params", to_json(cfg.params)}};
}

PlanConfig plan_config_from_json(const json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("plan")) {
    throw PlanError("plan config needs 'space' and 'plan'");
  }
  PlanConfig cfg;
  cfg.space = space_from_json(j.at("space"));
  cfg.plan = plan_node_from_json(j.at("plan"));
  cfg.params = plan_params_from_json(j.value("params", json()));
  return cfg;
}

PlanConfig load_plan_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlanError("cannot open plan config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw PlanError("plan config '" + path + "' is not valid JSON: " + e.what());
  }
  return plan_config_from_json(j);
}

void save_plan_config(const PlanConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw PlanError("cannot write plan config '" + path + "'");
  out << to_json(cfg).dump(2) << "\n";
}

namespace {

void validate_node(const PlanNode& node, const SearchSpace& space, const SearchSpace& free) {
  auto check_known = [&](const std::string& v) {
    if (!space.contains(v)) throw PlanError("unknown variable '" + v + "'");
    if (!free.contains(v)) throw PlanError("variable '" + v + "' claimed twice");
  };
  switch (node.type) {
    case PlanNode::Type::joint: {
      if (node.vars.empty()) throw PlanError("joint node claims no variables");
      std::set<std::string> seen;
      for (const auto& v : node.vars) {
        check_known(v);
        if (!seen.insert(v).second) throw PlanError("variable '" + v + "' claimed twice");
      }
      for (const auto& v : free.variables()) {
        if (!seen.contains(v.name)) throw PlanError("uncovered variable '" + v.name + "'");
      }
      return;
    }
    case PlanNode::Type::conditioning: {
      check_known(node.cond_var);
      if (node.children.empty()) throw PlanError("conditioning node has no child");
      const auto& domain = free.at(node.cond_var).domain;
      if (domain.is_categorical()) {
        if (!node.cutpoints.empty()) throw PlanError("cutpoints given for categorical '" + node.cond_var + "'");
        std::vector<Variable> rest;
        for (const auto& v : free.variables()) {
          if (v.name != node.cond_var) rest.push_back(v);
        }
        const SearchSpace child_space(std::move(rest));
        if (node.arm_labels.empty()) {
          if (node.children.size() != 1) throw PlanError("conditioning node needs one shared child");
        } else {
          auto labels = domain.as_categorical().labels;
          auto given = node.arm_labels;
          std::sort(labels.begin(), labels.end());
          std::sort(given.begin(), given.end());
          if (labels != given || node.children.size() != node.arm_labels.size()) {
            throw PlanError("per-arm children must match the labels of '" + node.cond_var + "'");
          }
        }
        for (const auto& c : node.children) validate_node(c, space, child_space);
        return;
      }
      if (node.cutpoints.empty()) throw PlanError("conditioning on numeric '" + node.cond_var + "' needs cutpoints");
      if (!node.arm_labels.empty() || node.children.size() != 1) {
        throw PlanError("numeric conditioning takes one shared child");
      }
      try {
        split_numeric(free.at(node.cond_var), node.cutpoints);
      } catch (const SpaceError& e) {
        throw PlanError(e.what());
      }
      validate_node(node.children.front(), space, free);
      return;
    }
    case PlanNode::Type::alternating: {
      if (node.children.size() != 2) throw PlanError("alternating node needs exactly two children");
      const auto y = claimed_vars(node.children[0]);
      const auto z = claimed_vars(node.children[1]);
      for (const auto& v : y) check_known(v);
      for (const auto& v : z) {
        check_known(v);
        if (std::find(y.begin(), y.end(), v) != y.end()) throw PlanError("variable '" + v + "' claimed twice");
      }
      for (const auto& v : free.variables()) {
        if (std::find(y.begin(), y.end(), v.name) == y.end() &&
            std::find(z.begin(), z.end(), v.name) == z.end()) {
          throw PlanError("uncovered variable '" + v.name + "'");
        }
      }
      validate_node(node.children[0], space, free.project(y));
      validate_node(node.children[1], space, free.project(z));
      return;
    }
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::unique_ptr<Block> build_node(const PlanNode& node, const std::shared_ptr<const ObjectiveSpec>& objective,
                                  const Subgoal& subgoal, const SearchSpace& free,
                                  const std::shared_ptr<RunContext>& context, const BlockParams& params,
                                  std::uint64_t seed, std::uint64_t& counter) {
  switch (node.type) {
    case PlanNode::Type::joint:
      return std::make_unique<JointBlock>(objective, subgoal, free, context, params,
                                          splitmix64(seed + counter++));
    case PlanNode::Type::conditioning: {
      auto make_arm = [&](const std::string& label, const Subgoal& g, const SearchSpace& s) {
        const PlanNode* child = &node.children.front();
        for (std::size_t i = 0; i < node.arm_labels.size(); ++i) {
          if (node.arm_labels[i] == label) child = &node.children[i];
        }
        return build_node(*child, objective, g, s, context, params, seed, counter);
      };
      if (node.cutpoints.empty()) {
        return std::make_unique<ConditioningBlock>(objective, subgoal, free, context, params,
                                                   node.cond_var, make_arm);
      }
      return std::make_unique<ConditioningBlock>(objective, subgoal, free, context, params,
                                                 node.cond_var, node.cutpoints, make_arm);
    }
    case PlanNode::Type::alternating: {
      auto side = [&](const PlanNode& child) {
        return [&](const Subgoal& g, const SearchSpace& s) {
          return build_node(child, objective, g, s, context, params, seed, counter);
        };
      };
      return std::make_unique<AlternatingBlock>(objective, subgoal, free, context, params,
                                                claimed_vars(node.children[0]),
                                                claimed_vars(node.children[1]), side(node.children[0]),
                                                side(node.children[1]));
    }
  }
  throw PlanError("unknown node type");
}

}  // namespace

void validate_plan(const PlanConfig& cfg) { validate_node(cfg.plan, cfg.space, cfg.space); }

BlockParams block_params(const PlanParams& p) {
  BlockParams b;
  b.rounds = p.rounds;
  b.n_init = p.n_init;
  b.candidate_pool = p.candidate_pool;
  b.eu_window = p.window;
  b.eu_beta = p.beta;
  return b;
}

std::unique_ptr<Block> build_block(const PlanNode& node, std::shared_ptr<const ObjectiveSpec> objective,
                                   const Subgoal& subgoal, const SearchSpace& free_space,
                                   std::shared_ptr<RunContext> context, const BlockParams& params,
                                   std::uint64_t seed) {
  std::uint64_t counter = 0;
  return build_node(node, objective, subgoal, free_space, context, params, seed, counter);
}

Executor::Executor(const PlanConfig& cfg, ObjectiveSpec objective) : cfg_(cfg) {
  validate_plan(cfg_);
  if (!(objective.space == cfg_.space)) {
    throw PlanError("objective space does not match the plan config's space");
  }
  objective.cost_mode = cfg_.params.budget_mode;
  objective_ = std::make_shared<const ObjectiveSpec>(std::move(objective));
  context_ = std::make_shared<RunContext>();
  context_->budget_total = cfg_.params.budget;
  root_ = build_block(cfg_.plan, objective_, Subgoal{}, cfg_.space, context_, block_params(cfg_.params),
                      cfg_.params.seed);
}

std::vector<Trial> Executor::step() {
  if (done()) return {};
  auto produced = root_->do_next();
  for (const auto& t : produced) {
    trials_.push_back(t);
    log_spent_ += t.cost;
    if (t.ok() && (!running_best_ || t.value < trials_[*running_best_].value)) {
      running_best_ = trials_.size() - 1;
    }
    const Checkpoint* cp = nullptr;
    if (running_best_) {
      const auto& best = trials_[*running_best_];
      trajectory_.push_back({log_spent_, best.value, best.assignment});
      cp = &trajectory_.back();
    }
    if (sink_) sink_(t, cp);
  }
  return produced;
}

void Executor::run() {
  while (!done()) step();
}

Incumbent Executor::best() const { return root_->current_best(); }

std::unique_ptr<Executor> build(const PlanConfig& cfg, ObjectiveSpec objective) {
  return std::make_unique<Executor>(cfg, std::move(objective));
}

RunResult run(Executor& e) {
  e.run();
  RunResult r;
  if (e.has_best()) r.best = e.best();
  r.trajectory = e.trajectory();
  r.trials = e.trials().size();
  return r;
}

json to_json(const Annotations& a) {
  return {{"algorithm_var", a.algorithm_var}, {"feature_vars", a.feature_vars}, {"hp_vars", a.hp_vars}};
}

Annotations annotations_from_json(const json& j) {
  if (!j.is_object() || !j.contains("algorithm_var") || !j.contains("feature_vars") || !j.contains("hp_vars")) {
    throw PlanError("annotations need 'algorithm_var', 'feature_vars' and 'hp_vars'");
  }
  return {j.at("algorithm_var").get<std::string>(), j.at("feature_vars").get<std::vector<std::string>>(),
          j.at("hp_vars").get<std::vector<std::string>>()};
}

std::vector<NamedPlan> enumerate_coarse_plans(const SearchSpace& space, const Annotations& annotations,
                                              const PlanParams& params) {
  if (annotations.algorithm_var.empty()) throw PlanError("missing annotation 'algorithm_var'");
  if (annotations.feature_vars.empty()) throw PlanError("missing annotation 'feature_vars'");
  if (annotations.hp_vars.empty()) throw PlanError("missing annotation 'hp_vars'");
  if (!space.contains(annotations.algorithm_var)) {
    throw PlanError("unknown algorithm variable '" + annotations.algorithm_var + "'");
  }
  if (!space.at(annotations.algorithm_var).domain.is_categorical()) {
    throw PlanError("algorithm variable '" + annotations.algorithm_var + "' must be categorical");
  }
  std::set<std::string> seen = {annotations.algorithm_var};
  for (const auto* group : {&annotations.feature_vars, &annotations.hp_vars}) {
    for (const auto& v : *group) {
      if (!space.contains(v)) throw PlanError("unknown variable '" + v + "'");
      if (!seen.insert(v).second) throw PlanError("variable '" + v + "' annotated twice");
    }
  }
  for (const auto& v : space.variables()) {
    if (!seen.contains(v.name)) throw PlanError("variable '" + v.name + "' is not annotated");
  }

  auto canonical = [&](std::vector<std::string> names) { return space.project(names).names(); };
  auto with_alg = [&](std::vector<std::string> names) {
    names.push_back(annotations.algorithm_var);
    return canonical(std::move(names));
  };
  const auto fe = canonical(annotations.feature_vars);
  const auto hp = canonical(annotations.hp_vars);
  std::vector<std::string> fe_hp = fe;
  fe_hp.insert(fe_hp.end(), hp.begin(), hp.end());
  fe_hp = canonical(fe_hp);
  const auto& alg = annotations.algorithm_var;

  std::vector<NamedPlan> out;
  auto add = [&](std::string name, PlanNode node) {
    out.push_back({std::move(name), PlanConfig{space, std::move(node), params}});
    validate_plan(out.back().config);
  };
  add("joint", PlanNode::joint(space.names()));
  add("conditioning", PlanNode::conditioning(alg, PlanNode::joint(fe_hp)));
  add("conditioning_alternating",
      PlanNode::conditioning(alg, PlanNode::alternating(PlanNode::joint(fe), PlanNode::joint(hp))));
  add("alternating_hp_alg", PlanNode::alternating(PlanNode::joint(fe), PlanNode::joint(with_alg(hp))));
  add("alternating_fe_alg", PlanNode::alternating(PlanNode::joint(with_alg(fe)), PlanNode::joint(hp)));
  return out;
}

}  // namespace blockopt
