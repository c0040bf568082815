#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "blockopt/forest.hpp"
#include "blockopt/objective.hpp"
#include "blockopt/search_space.hpp"

namespace blockopt {

/// Budget shared by every block of one run. Leaves charge it as they
/// evaluate; composite blocks read it to stop early and to size EU queries.
struct RunContext {
  double budget_total = std::numeric_limits<double>::infinity();
  double spent = 0.0;
  std::size_t leaf_evaluations = 0;

  double remaining() const { return budget_total > spent ? budget_total - spent : 0.0; }
  bool exhausted() const { return spent >= budget_total; }
};

struct BlockParams {
  std::size_t rounds = 5;  // L: round-robin passes per conditioning step, init rounds when alternating
  std::size_t n_init = 3;
  std::size_t candidate_pool = 1024;
  std::size_t perturbations = 10;
  std::size_t eu_window = 10;
  double eu_beta = 1.0;
  // ok trials every active arm needs before elimination; 0 means 2 * rounds
  std::size_t elimination_min_trials = 0;
  ForestConfig forest;
  double fidelity = 1.0;
  bool parallel = true;
};

/// Expected-utility bracket, in utility units (-loss).
struct EUBound {
  double lower = 0.0;
  double upper = 0.0;
};

struct Incumbent {
  Assignment assignment;
  double value = 0.0;
};

/// One optimizer over a subgoal's free variables. All produced trials carry
/// full assignments over the objective's space.
class Block {
 public:
  Block(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal, SearchSpace free_space,
        std::shared_ptr<RunContext> context, const BlockParams& params);
  virtual ~Block() = default;

  Block(const Block&) = delete;
  Block& operator=(const Block&) = delete;

  /// One iteration; returns every leaf trial it produced, in order.
  std::vector<Trial> do_next();

  bool has_best() const;
  /// Throws std::logic_error when nothing succeeded yet.
  virtual Incumbent current_best() const;
  EUBound get_eu(double budget) const;
  double get_eui() const;

  /// Re-pins some of this block's fixed variables. Free or unknown
  /// variables throw SpaceError. History is kept.
  void set_var(const Assignment& pins);

  const History& history() const { return history_; }
  const CostModel& cost_model() const { return cost_model_; }
  const Subgoal& subgoal() const { return subgoal_; }
  const SearchSpace& free_space() const { return free_space_; }
  const BlockParams& params() const { return params_; }
  std::size_t do_next_calls() const { return calls_; }

 protected:
  virtual std::vector<Trial> step() = 0;
  virtual void on_pins_changed(const Assignment&) {}
  virtual void after_record() {}

  std::shared_ptr<const ObjectiveSpec> objective_;
  Subgoal subgoal_;
  SearchSpace free_space_;
  std::shared_ptr<RunContext> context_;
  BlockParams params_;

 private:
  History history_;
  CostModel cost_model_;
  std::size_t calls_ = 0;
};

/// Builds a child block for the given subgoal and free space.
using BlockFactory =
    std::function<std::unique_ptr<Block>(const Subgoal&, const SearchSpace& free_space)>;

}  // namespace blockopt
