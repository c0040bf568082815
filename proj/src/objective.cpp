#include "blockopt/objective.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <thread>

namespace blockopt {

const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::ok:
      return "ok";
    case TrialStatus::failed:
      return "failed";
    case TrialStatus::timeout:
      return "timeout";
  }
  return "unknown";
}

const char* to_string(BudgetMode m) { return m == BudgetMode::count ? "count" : "seconds"; }

BudgetMode parse_budget_mode(const std::string& s) {
  if (s == "count") return BudgetMode::count;
  if (s == "seconds") return BudgetMode::seconds;
  throw std::invalid_argument("budget mode must be 'seconds' or 'count', got '" + s + "'");
}

namespace {

EvalOutcome call_guarded(const FunctionEvaluator::Fn& fn, const Assignment& a, double fidelity) {
  try {
    const double v = fn(a, fidelity);
    if (!std::isfinite(v)) return {TrialStatus::failed, 0.0, "non-finite objective value"};
    return {TrialStatus::ok, v, {}};
  } catch (const std::exception& e) {
    return {TrialStatus::failed, 0.0, e.what()};
  } catch (...) {
    return {TrialStatus::failed, 0.0, "unknown exception"};
  }
}

}  // namespace

EvalOutcome FunctionEvaluator::evaluate(const Assignment& a, double fidelity, double timeout_s) {
  if (!std::isfinite(timeout_s)) return call_guarded(*fn_, a, fidelity);

  std::promise<EvalOutcome> promise;
  auto result = promise.get_future();
  std::thread([fn = fn_, a, fidelity, p = std::move(promise)]() mutable {
    p.set_value(call_guarded(*fn, a, fidelity));
  }).detach();
  if (result.wait_for(std::chrono::duration<double>(timeout_s)) != std::future_status::ready) {
    return {TrialStatus::timeout, 0.0, "evaluation exceeded timeout"};
  }
  return result.get();
}

ObjectiveSpec make_objective(SearchSpace space, FunctionEvaluator::Fn fn, BudgetMode mode) {
  ObjectiveSpec spec;
  spec.space = std::move(space);
  spec.evaluator = std::make_shared<FunctionEvaluator>(std::move(fn));
  spec.cost_mode = mode;
  return spec;
}

Trial evaluate(const ObjectiveSpec& spec, const Assignment& a, double fidelity, double penalty) {
  validate_full(spec.space, a);
  if (!(fidelity > 0.0 && fidelity <= 1.0)) throw std::invalid_argument("fidelity must lie in (0, 1]");
  if (!(spec.timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");
  if (!spec.evaluator) throw std::invalid_argument("objective has no evaluator");

  const auto start = std::chrono::steady_clock::now();
  EvalOutcome outcome = spec.evaluator->evaluate(a, fidelity, spec.timeout_s);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  Trial t;
  t.assignment = a;
  t.fidelity = fidelity;
  t.status = outcome.status;
  t.value = outcome.status == TrialStatus::ok ? outcome.value : penalty;
  t.cost = spec.cost_mode == BudgetMode::count ? 1.0 : elapsed.count();
  return t;
}

void History::record(Trial t) {
  if (t.ok()) {
    if (!best_index_ || t.value < trials_[*best_index_].value) best_index_ = trials_.size();
    worst_ok_ = ok_count_ == 0 ? t.value : std::max(worst_ok_, t.value);
    ++ok_count_;
  }
  trials_.push_back(std::move(t));
  best_so_far_.push_back(best_index_ ? std::optional<double>(trials_[*best_index_].value)
                                     : std::nullopt);
}

const Trial& History::best() const {
  if (!best_index_) throw std::logic_error("history holds no successful trial");
  return trials_[*best_index_];
}

std::vector<double> History::ok_values() const {
  std::vector<double> out;
  out.reserve(ok_count_);
  for (const auto& t : trials_) {
    if (t.ok()) out.push_back(t.value);
  }
  return out;
}

double History::penalty() const {
  if (ok_count_ == 0) return 1.0;
  const double best = trials_[*best_index_].value;
  return worst_ok_ + 0.1 * (worst_ok_ - best);
}

CostModel::CostModel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("cost smoothing alpha must lie in (0, 1]");
}

void CostModel::update(double observed) {
  if (!(observed >= 0.0)) throw std::invalid_argument("observed cost must be non-negative");
  ema_ = observed_ ? alpha_ * observed + (1.0 - alpha_) * ema_ : observed;
  observed_ = true;
}

}  // namespace blockopt
