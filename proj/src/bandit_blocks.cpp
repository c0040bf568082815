#include "blockopt/bandit_blocks.hpp"

#include <algorithm>
#include <set>

#include "blockopt/estimators.hpp"

namespace blockopt {

namespace {

std::string range_label(const Domain& d) {
  if (d.is_continuous()) {
    const auto& c = d.as_continuous();
    return "[" + to_string(Value(c.lo)) + "," + to_string(Value(c.hi)) + (c.upper_open ? ")" : "]");
  }
  const auto& i = d.as_integer();
  return "[" + std::to_string(i.lo) + "," + std::to_string(i.hi) + (i.upper_open ? ")" : "]");
}

SearchSpace without(const SearchSpace& space, const std::string& name) {
  std::vector<Variable> vars;
  for (const auto& v : space.variables()) {
    if (v.name != name) vars.push_back(v);
  }
  return SearchSpace(std::move(vars));
}

}  // namespace

ConditioningBlock::ConditioningBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal,
                                     SearchSpace free_space, std::shared_ptr<RunContext> context,
                                     const BlockParams& params, std::string cond_var,
                                     const ArmFactory& make_arm)
    : Block(std::move(objective), std::move(subgoal), std::move(free_space), std::move(context), params),
      cond_var_(std::move(cond_var)) {
  const auto& var = free_space_.at(cond_var_);
  if (!var.domain.is_categorical()) {
    throw SpaceError("conditioning on numeric '" + cond_var_ + "' needs cutpoints");
  }
  const SearchSpace rest = without(free_space_, cond_var_);
  for (const auto& label : var.domain.as_categorical().labels) {
    Subgoal child = subgoal_;
    child.fixed.emplace(cond_var_, label);
    arms_.push_back({label, make_arm(label, child, rest), true});
  }
}

ConditioningBlock::ConditioningBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal,
                                     SearchSpace free_space, std::shared_ptr<RunContext> context,
                                     const BlockParams& params, std::string cond_var,
                                     const std::vector<double>& cutpoints, const ArmFactory& make_arm)
    : Block(std::move(objective), std::move(subgoal), std::move(free_space), std::move(context), params),
      cond_var_(std::move(cond_var)) {
  const auto& var = free_space_.at(cond_var_);
  for (const auto& piece : split_numeric(var, cutpoints)) {
    const auto label = range_label(piece);
    arms_.push_back({label, make_arm(label, subgoal_, free_space_.with_domain(cond_var_, piece)), true});
  }
}

std::size_t ConditioningBlock::min_trials_for_elimination() const {
  return params_.elimination_min_trials > 0 ? params_.elimination_min_trials : 2 * params_.rounds;
}

std::vector<std::string> ConditioningBlock::active_labels() const {
  std::vector<std::string> out;
  for (const auto& arm : arms_) {
    if (arm.active) out.push_back(arm.label);
  }
  return out;
}

std::size_t ConditioningBlock::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(arms_.begin(), arms_.end(), [](const Arm& a) { return a.active; }));
}

std::vector<Trial> ConditioningBlock::step() {
  std::vector<Arm*> active;
  for (auto& arm : arms_) {
    if (arm.active) active.push_back(&arm);
  }
  std::vector<Trial> out;
  for (std::size_t round = 0; round < params_.rounds; ++round) {
    for (Arm* arm : active) {
      if (context_->exhausted()) break;
      auto trials = arm->block->do_next();
      out.insert(out.end(), std::make_move_iterator(trials.begin()),
                 std::make_move_iterator(trials.end()));
    }
  }

  const std::size_t needed = min_trials_for_elimination();
  const bool converged = std::all_of(active.begin(), active.end(), [&](const Arm* a) {
    return a->block->history().ok_count() >= needed;
  });
  if (active.size() > 1 && converged) {
    std::vector<EUBound> bounds;
    for (const Arm* arm : active) bounds.push_back(arm->block->get_eu(context_->remaining()));
    for (std::size_t i : eliminate_dominated(bounds)) active[i]->active = false;
  }
  return out;
}

Incumbent ConditioningBlock::current_best() const {
  const Block* best = nullptr;
  for (const auto& arm : arms_) {
    if (!arm.block->has_best()) continue;
    if (best == nullptr || arm.block->history().best_value() < best->history().best_value()) {
      best = arm.block.get();
    }
  }
  if (best == nullptr) throw std::logic_error("conditioning block: no arm has a successful trial");
  return best->current_best();
}

void ConditioningBlock::on_pins_changed(const Assignment& pins) {
  for (auto& arm : arms_) arm.block->set_var(pins);
}

AlternatingBlock::AlternatingBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal,
                                   SearchSpace free_space, std::shared_ptr<RunContext> context,
                                   const BlockParams& params, std::vector<std::string> y_vars,
                                   std::vector<std::string> z_vars, const BlockFactory& make_y,
                                   const BlockFactory& make_z)
    : Block(std::move(objective), std::move(subgoal), std::move(free_space), std::move(context), params),
      y_vars_(std::move(y_vars)),
      z_vars_(std::move(z_vars)) {
  if (y_vars_.empty() || z_vars_.empty()) throw SpaceError("alternating partition sides must be nonempty");
  std::set<std::string> seen;
  for (const auto* side : {&y_vars_, &z_vars_}) {
    for (const auto& name : *side) {
      if (!free_space_.contains(name)) throw SpaceError("partition names non-free variable '" + name + "'");
      if (!seen.insert(name).second) throw SpaceError("variable '" + name + "' on both partition sides");
    }
  }
  for (const auto& v : free_space_.variables()) {
    if (!seen.contains(v.name)) throw SpaceError("partition misses variable '" + v.name + "'");
  }

  const SearchSpace y_space = free_space_.project(y_vars_);
  const SearchSpace z_space = free_space_.project(z_vars_);
  Subgoal g1 = subgoal_;
  g1.fixed = merge(g1.fixed, default_assignment(z_space));
  Subgoal g2 = subgoal_;
  g2.fixed = merge(g2.fixed, default_assignment(y_space));
  b1_ = make_y(g1, y_space);
  b2_ = make_z(g2, z_space);
}

void AlternatingBlock::append(std::vector<Trial>& out, std::vector<Trial> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

void AlternatingBlock::pin_from(const Block& source, const std::vector<std::string>& vars, Block& target) {
  if (!source.has_best()) return;
  target.set_var(restrict_to(source.current_best().assignment, vars));
}

std::vector<Trial> AlternatingBlock::step() {
  std::vector<Trial> out;
  if (!initialized_) {
    for (std::size_t round = 0; round < params_.rounds && !context_->exhausted(); ++round) {
      append(out, b1_->do_next());
      pin_from(*b1_, y_vars_, *b2_);
      if (context_->exhausted()) break;
      append(out, b2_->do_next());
      pin_from(*b2_, z_vars_, *b1_);
    }
    initialized_ = true;
    return out;
  }

  const double eui1 = b1_->has_best() ? b1_->get_eui() : 0.0;
  const double eui2 = b2_->has_best() ? b2_->get_eui() : 0.0;
  if (eui1 >= eui2) {
    pin_from(*b2_, z_vars_, *b1_);
    append(out, b1_->do_next());
  } else {
    pin_from(*b1_, y_vars_, *b2_);
    append(out, b2_->do_next());
  }
  return out;
}

Incumbent AlternatingBlock::current_best() const {
  if (b1_->has_best() && b2_->has_best()) {
    return b2_->history().best_value() < b1_->history().best_value() ? b2_->current_best()
                                                                     : b1_->current_best();
  }
  if (b1_->has_best()) return b1_->current_best();
  if (b2_->has_best()) return b2_->current_best();
  throw std::logic_error("alternating block: nothing evaluated yet");
}

void AlternatingBlock::on_pins_changed(const Assignment& pins) {
  b1_->set_var(pins);
  b2_->set_var(pins);
}

}  // namespace blockopt
