#include "blockopt/block.hpp"

#include "blockopt/estimators.hpp"

namespace blockopt {

Block::Block(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal, SearchSpace free_space,
             std::shared_ptr<RunContext> context, const BlockParams& params)
    : objective_(std::move(objective)),
      subgoal_(std::move(subgoal)),
      free_space_(std::move(free_space)),
      context_(std::move(context)),
      params_(params) {
  if (!objective_) throw std::invalid_argument("block needs an objective");
  if (!context_) throw std::invalid_argument("block needs a run context");
  validate(objective_->space, subgoal_.fixed);
  for (const auto& v : free_space_.variables()) {
    if (!objective_->space.contains(v.name)) throw SpaceError("unknown variable '" + v.name + "'");
    if (subgoal_.fixed.contains(v.name)) {
      throw SpaceError("variable '" + v.name + "' is both fixed and free");
    }
  }
}

std::vector<Trial> Block::do_next() {
  auto trials = step();
  for (const auto& t : trials) {
    history_.record(t);
    cost_model_.update(t.cost);
  }
  ++calls_;
  after_record();
  return trials;
}

bool Block::has_best() const { return history_.has_best(); }

Incumbent Block::current_best() const {
  const auto& t = history_.best();
  return {t.assignment, t.value};
}

EUBound Block::get_eu(double budget) const {
  return get_eu_estimate(history_, cost_model_, budget, params_.eu_window, params_.eu_beta);
}

double Block::get_eui() const { return get_eui_estimate(history_); }

void Block::set_var(const Assignment& pins) {
  for (const auto& [name, value] : pins) {
    if (free_space_.contains(name)) throw SpaceError("cannot pin free variable '" + name + "'");
    if (!subgoal_.fixed.contains(name)) throw SpaceError("unknown pinned variable '" + name + "'");
    if (!contains_value(objective_->space.at(name).domain, value)) {
      throw SpaceError("pinned value outside domain of '" + name + "'");
    }
  }
  for (const auto& [name, value] : pins) subgoal_.fixed[name] = value;
  on_pins_changed(pins);
}

}  // namespace blockopt
