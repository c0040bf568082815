#pragma once

#include <mutex>
#include <string>
#include <sys/types.h>

#include "blockopt/objective.hpp"

namespace blockopt {

/// Evaluates assignments in a child process speaking line-delimited JSON:
///
///   request  {"id": int, "assignment": {...}, "fidelity": float}
///   response {"id": int, "value": float} | {"id": int, "error": string}
///
/// The child is started lazily as `sh -c "<command> <dataset>"` and reused
/// for every request. A child that exits, answers garbage or overruns the
/// timeout is reaped; the next request starts a fresh one. One request is in
/// flight at a time.
class SubprocessEvaluator final : public Evaluator {
 public:
  SubprocessEvaluator(std::string command, std::string dataset_ref);
  ~SubprocessEvaluator() override;

  SubprocessEvaluator(const SubprocessEvaluator&) = delete;
  SubprocessEvaluator& operator=(const SubprocessEvaluator&) = delete;

  EvalOutcome evaluate(const Assignment& a, double fidelity, double timeout_s) override;

  /// Number of children started so far.
  int spawn_count() const { return spawns_; }

 private:
  void spawn();
  void shutdown(bool force);
  bool read_line(std::string& line, double timeout_s);

  std::string command_;
  std::string dataset_ref_;
  std::mutex mu_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  long long next_id_ = 0;
  int spawns_ = 0;
};

}  // namespace blockopt
