#pragma once

#include <cstdint>

#include "blockopt/block.hpp"
#include "blockopt/forest.hpp"

namespace blockopt {

/// Leaf block: Bayesian optimisation over its free variables with a
/// random-forest surrogate and expected improvement.
///
/// Until n_init ok trials exist, proposals come from a uniform initial
/// design. Afterwards every proposal scores candidate_pool uniform draws plus
/// `perturbations` copies of the incumbent (one coordinate resampled each)
/// by EI and takes the first maximiser. The surrogate is refit on the whole
/// history after every evaluation once n_init ok trials exist; failed trials
/// enter the fit with their penalty value.
class JointBlock final : public Block {
 public:
  JointBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal, SearchSpace free_space,
             std::shared_ptr<RunContext> context, const BlockParams& params, std::uint64_t seed);

  /// Next point over the free variables. Advances the block's RNG.
  Assignment propose();

  const RandomForest& surrogate() const { return surrogate_; }
  std::size_t surrogate_fits() const { return fits_; }

  /// Candidates of the last model-based proposal, one coordinate row each,
  /// their encoded features, and their EI scores.
  const Matrix& last_pool() const { return last_pool_; }
  const Matrix& last_features() const { return last_features_; }
  const std::vector<double>& last_scores() const { return last_scores_; }

 protected:
  std::vector<Trial> step() override;
  void after_record() override;

 private:
  void refit();

  Rng rng_;
  RandomForest surrogate_;
  std::size_t fits_ = 0;
  Matrix last_pool_;
  Matrix last_features_;
  std::vector<double> last_scores_;
};

}  // namespace blockopt
