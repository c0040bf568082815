#include "blockopt/joint_block.hpp"

#include "blockopt/kernels.hpp"

namespace blockopt {

JointBlock::JointBlock(std::shared_ptr<const ObjectiveSpec> objective, Subgoal subgoal,
                       SearchSpace free_space, std::shared_ptr<RunContext> context,
                       const BlockParams& params, std::uint64_t seed)
    : Block(std::move(objective), std::move(subgoal), std::move(free_space), std::move(context), params),
      rng_(seed),
      surrogate_(params.forest) {
  if (free_space_.empty()) throw SpaceError("joint block over an empty space has nothing to optimize");
  if (params_.n_init == 0) throw std::invalid_argument("n_init must be >= 1");
  if (params_.candidate_pool == 0) throw std::invalid_argument("candidate_pool must be >= 1");
}

Assignment JointBlock::propose() {
  if (history().ok_count() < params_.n_init || !surrogate_.trained()) {
    return sample_uniform(free_space_, rng_, 1).front();
  }

  const std::size_t dims = free_space_.size();
  const std::size_t rows = params_.candidate_pool + params_.perturbations;
  Matrix pool(rows, dims);
  for (std::size_t i = 0; i < params_.candidate_pool; ++i) {
    auto row = pool.row(i);
    for (std::size_t j = 0; j < dims; ++j) row[j] = sample_coord(free_space_.variables()[j].domain, rng_);
  }
  const auto incumbent = to_coords(free_space_, restrict_to(history().best().assignment, free_space_.names()));
  std::uniform_int_distribution<std::size_t> pick(0, dims - 1);
  for (std::size_t i = params_.candidate_pool; i < rows; ++i) {
    auto row = pool.row(i);
    std::copy(incumbent.begin(), incumbent.end(), row.begin());
    const std::size_t j = pick(rng_);
    row[j] = sample_coord(free_space_.variables()[j].domain, rng_);
  }

  Matrix x(rows, encoded_width(free_space_));
  for (std::size_t i = 0; i < rows; ++i) encode_coords(free_space_, pool.row(i), x.row(i));
  std::vector<double> scores(rows);
  const double best = history().best_value();
  if (params_.parallel) {
    kernels::ei_scores_parallel(surrogate_, x, best, scores);
  } else {
    kernels::ei_scores_serial(surrogate_, x, best, scores);
  }
  const std::size_t chosen = kernels::argmax_first(scores);
  Assignment out = from_coords(free_space_, pool.row(chosen));
  last_pool_ = std::move(pool);
  last_features_ = std::move(x);
  last_scores_ = std::move(scores);
  return out;
}

std::vector<Trial> JointBlock::step() {
  const Assignment full = merge(subgoal_.fixed, propose());
  Trial t = evaluate(*objective_, full, params_.fidelity, history().penalty());
  context_->spent += t.cost;
  ++context_->leaf_evaluations;
  return {std::move(t)};
}

void JointBlock::after_record() {
  if (history().ok_count() >= params_.n_init) refit();
}

void JointBlock::refit() {
  const auto& trials = history().trials();
  Matrix x(trials.size(), encoded_width(free_space_));
  std::vector<double> y(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    encode(free_space_, trials[i].assignment, x.row(i));
    y[i] = trials[i].value;
  }
  surrogate_.fit(x, y, rng_, params_.parallel);
  ++fits_;
}

}  // namespace blockopt
