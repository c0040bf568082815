#pragma once

#include <string>
#include <vector>

#include "blockopt/block.hpp"

namespace blockopt {

/// Builds the child block of one conditioning arm.
using ArmFactory = std::function<std::unique_ptr<Block>(const std::string& arm_label,
                                                        const Subgoal&, const SearchSpace& free_space)>;

/// Forks one child per value of a categorical variable (or per sub-range
/// of a split numeric variable) and plays the children as bandit arms.
///
/// A step plays every active arm `rounds` times round-robin, then asks each
/// active arm for its EU bracket given the run's remaining budget and drops
/// dominated arms. Elimination waits until every active arm holds at least
/// `elimination_min_trials` ok trials.
class ConditioningBlock final : public Block {
 public:
  struct Arm {
    std::string label;
    std::unique_ptr<Block> block;
    bool active = true;
  };

  /// Categorical conditioning: arm d fixes cond_var = d.
  ConditioningBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal,
                    SearchSpace free_space, std::shared_ptr<RunContext> context,
                    const BlockParams& params, std::string cond_var, const ArmFactory& make_arm);
  /// Numeric conditioning: arm k keeps cond_var free over its k-th sub-range.
  ConditioningBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal,
                    SearchSpace free_space, std::shared_ptr<RunContext> context,
                    const BlockParams& params, std::string cond_var,
                    const std::vector<double>& cutpoints, const ArmFactory& make_arm);

  /// Best over all arms, eliminated ones included; ties go to the earlier arm.
  Incumbent current_best() const override;

  const std::string& cond_var() const { return cond_var_; }
  const std::vector<Arm>& arms() const { return arms_; }
  std::vector<std::string> active_labels() const;
  std::size_t active_count() const;
  std::size_t min_trials_for_elimination() const;

 protected:
  std::vector<Trial> step() override;
  void on_pins_changed(const Assignment& pins) override;

 private:
  std::string cond_var_;
  std::vector<Arm> arms_;
};

/// Splits its free variables into y and z, optimised by two children that
/// see each other's current best through pinned values.
///
/// The first step runs the initial round-robin (`rounds` rounds of B1 then
/// B2, cross-pinning after each) starting from default values. Every later
/// step polls both children's EUI and steps the larger one (B1 on ties),
/// first pinning the other child's current best into it.
class AlternatingBlock final : public Block {
 public:
  /// make_y builds B1 (free over y, z pinned); make_z builds B2.
  AlternatingBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal,
                   SearchSpace free_space, std::shared_ptr<RunContext> context,
                   const BlockParams& params, std::vector<std::string> y_vars,
                   std::vector<std::string> z_vars, const BlockFactory& make_y,
                   const BlockFactory& make_z);

  /// B1's best unless B2's is strictly lower.
  Incumbent current_best() const override;

  bool initialized() const { return initialized_; }
  const Block& b1() const { return *b1_; }
  const Block& b2() const { return *b2_; }
  const std::vector<std::string>& y_vars() const { return y_vars_; }
  const std::vector<std::string>& z_vars() const { return z_vars_; }

 protected:
  std::vector<Trial> step() override;
  void on_pins_changed(const Assignment& pins) override;

 private:
  static void append(std::vector<Trial>& out, std::vector<Trial> more);
  void pin_from(const Block& source, const std::vector<std::string>& vars, Block& target);

  std::vector<std::string> y_vars_;
  std::vector<std::string> z_vars_;
  std::unique_ptr<Block> b1_;
  std::unique_ptr<Block> b2_;
  bool initialized_ = false;
};

}  // namespace blockopt
