#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blockopt/search_space.hpp"

namespace blockopt {

enum class TrialStatus { ok, failed, timeout };

const char* to_string(TrialStatus s);

/// How evaluation cost is charged against the budget.
enum class BudgetMode {
  seconds,  // wall-clock time spent inside evaluate
  count,    // every evaluation costs exactly 1
};

const char* to_string(BudgetMode m);
BudgetMode parse_budget_mode(const std::string& s);

/// Raw result of one call into an evaluator.
struct EvalOutcome {
  TrialStatus status = TrialStatus::ok;
  double value = 0.0;
  std::string message;
};

/// The black box. Implementations must be reentrant: evaluate may be called
/// concurrently on distinct assignments.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  /// Never throws for evaluator-side faults; reports them in the outcome.
  virtual EvalOutcome evaluate(const Assignment& a, double fidelity, double timeout_s) = 0;
};

/// Wraps an in-process function. Exceptions and non-finite values become
/// failed outcomes. A finite timeout runs the call on a watchdog thread; a
/// call that overruns is abandoned, not cancelled.
class FunctionEvaluator final : public Evaluator {
 public:
  using Fn = std::function<double(const Assignment&, double fidelity)>;
  explicit FunctionEvaluator(Fn fn) : fn_(std::make_shared<Fn>(std::move(fn))) {}
  EvalOutcome evaluate(const Assignment& a, double fidelity, double timeout_s) override;

 private:
  std::shared_ptr<Fn> fn_;
};

/// Loss is always minimised; utility elsewhere means -loss.
struct ObjectiveSpec {
  SearchSpace space;
  std::shared_ptr<Evaluator> evaluator;
  std::string dataset_ref;
  double timeout_s = std::numeric_limits<double>::infinity();
  BudgetMode cost_mode = BudgetMode::seconds;
};

ObjectiveSpec make_objective(SearchSpace space, FunctionEvaluator::Fn fn,
                             BudgetMode mode = BudgetMode::count);

struct Trial {
  Assignment assignment;
  double value = 0.0;
  double cost = 0.0;
  double fidelity = 1.0;
  TrialStatus status = TrialStatus::ok;

  bool ok() const { return status == TrialStatus::ok; }
};

/// Evaluates a full assignment. Failed and timed-out evaluations carry
/// `penalty` as their value. Throws SpaceError for malformed assignments.
Trial evaluate(const ObjectiveSpec& spec, const Assignment& a, double fidelity, double penalty);

/// Ordered trial record with a running minimum over ok trials.
class History {
 public:
  void record(Trial t);

  const std::vector<Trial>& trials() const { return trials_; }
  std::size_t size() const { return trials_.size(); }
  std::size_t ok_count() const { return ok_count_; }
  bool has_best() const { return best_index_.has_value(); }
  /// Earliest ok trial with the minimal value.
  const Trial& best() const;
  double best_value() const { return best().value; }
  /// Best value after each recorded trial (nullopt until the first ok trial).
  const std::vector<std::optional<double>>& best_so_far() const { return best_so_far_; }
  /// Values of ok trials in record order.
  std::vector<double> ok_values() const;

  /// Value charged to a failed trial: worst ok value plus 10% of the ok
  /// range, or 1.0 when nothing has succeeded yet.
  double penalty() const;

 private:
  std::vector<Trial> trials_;
  std::vector<std::optional<double>> best_so_far_;
  std::optional<std::size_t> best_index_;
  std::size_t ok_count_ = 0;
  double worst_ok_ = 0.0;
};

/// Exponentially weighted mean of observed evaluation cost.
class CostModel {
 public:
  static constexpr double kDefaultAlpha = 0.3;

  explicit CostModel(double alpha = kDefaultAlpha);

  void update(double observed);
  double ema() const { return ema_; }
  double alpha() const { return alpha_; }
  bool observed() const { return observed_; }

 private:
  double alpha_;
  double ema_ = 0.0;
  bool observed_ = false;
};

}  // namespace blockopt
