#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "blockopt/benchmarks.hpp"
#include "blockopt/objective.hpp"
#include "blockopt/subprocess.hpp"
#include "oracles.hpp"

using namespace blockopt;

namespace {

SearchSpace unit_box() {
  return SearchSpace({{"u", Domain::continuous(0, 1)}, {"v", Domain::continuous(0, 1)}});
}

Trial ok_trial(double v) {
  Trial t;
  t.value = v;
  t.cost = 1.0;
  return t;
}

Trial failed_trial(double penalty) {
  Trial t;
  t.value = penalty;
  t.status = TrialStatus::failed;
  return t;
}

}  // namespace

TEST_CASE("Branin evaluation matches the closed form") {
  const auto b = load_benchmark("branin");
  const auto spec = benchmark_objective(b);
  const Assignment a{{"x1", std::numbers::pi}, {"x2", 2.275}};
  const Trial t = evaluate(spec, a, 1.0, 1.0);
  CHECK(t.ok());
  CHECK(t.value == doctest::Approx(oracle::branin(std::numbers::pi, 2.275)).epsilon(1e-12));
  CHECK(std::abs(t.value - 0.397887) < 1e-5);
  CHECK(t.cost == 1.0);

  // a coarse scan around the point never finds anything lower than the
  // global minimum value
  double lowest = t.value;
  for (int i = -20; i <= 20; ++i) {
    for (int j = -20; j <= 20; ++j) {
      lowest = std::min(lowest, oracle::branin(std::numbers::pi + i * 1e-3, 2.275 + j * 1e-3));
    }
  }
  CHECK(lowest >= 0.397887 - 1e-5);
}

TEST_CASE("evaluator faults become penalised trials") {
  SUBCASE("exception") {
    auto spec = make_objective(unit_box(), [](const Assignment&, double) -> double { throw std::runtime_error("boom"); });
    const Trial t = evaluate(spec, {{"u", 0.1}, {"v", 0.2}}, 1.0, 7.5);
    CHECK(t.status == TrialStatus::failed);
    CHECK(t.value == 7.5);
  }
  SUBCASE("non-finite value") {
    auto spec = make_objective(unit_box(), [](const Assignment&, double) { return std::nan(""); });
    const Trial t = evaluate(spec, {{"u", 0.1}, {"v", 0.2}}, 1.0, 2.0);
    CHECK(t.status == TrialStatus::failed);
    CHECK(t.value == 2.0);
  }
  SUBCASE("timeout") {
    auto spec = make_objective(unit_box(), [](const Assignment&, double) {
      std::this_thread::sleep_for(std::chrono::milliseconds(400));
      return 0.0;
    });
    spec.timeout_s = 0.05;
    const auto start = std::chrono::steady_clock::now();
    const Trial t = evaluate(spec, {{"u", 0.1}, {"v", 0.2}}, 1.0, 3.0);
    const double waited = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(t.status == TrialStatus::timeout);
    CHECK(t.value == 3.0);
    CHECK(waited < 0.3);
  }
}

TEST_CASE("malformed assignments are rejected before dispatch") {
  int calls = 0;
  auto spec = make_objective(unit_box(), [&](const Assignment&, double) {
    ++calls;
    return 0.0;
  });
  CHECK_THROWS_AS(evaluate(spec, {{"u", 0.1}}, 1.0, 1.0), SpaceError);
  CHECK_THROWS_AS(evaluate(spec, {{"u", 0.1}, {"v", 4.0}}, 1.0, 1.0), SpaceError);
  CHECK_THROWS_AS(evaluate(spec, {{"u", 0.1}, {"v", 0.2}, {"w", 0.3}}, 1.0, 1.0), SpaceError);
  CHECK_THROWS_AS(evaluate(spec, {{"u", 0.1}, {"v", std::string("x")}}, 1.0, 1.0), SpaceError);
  CHECK_THROWS(evaluate(spec, {{"u", 0.1}, {"v", 0.2}}, 0.0, 1.0));
  CHECK(calls == 0);
}

TEST_CASE("fidelity is handed to the evaluator") {
  double seen = -1;
  auto spec = make_objective(unit_box(), [&](const Assignment&, double f) {
    seen = f;
    return 0.0;
  });
  const Trial t = evaluate(spec, {{"u", 0.1}, {"v", 0.2}}, 0.25, 1.0);
  CHECK(seen == 0.25);
  CHECK(t.fidelity == 0.25);
}

TEST_CASE("seconds mode charges measured wall time") {
  auto spec = make_objective(
      unit_box(),
      [](const Assignment&, double) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        return 1.0;
      },
      BudgetMode::seconds);
  const Trial t = evaluate(spec, {{"u", 0.1}, {"v", 0.2}}, 1.0, 1.0);
  CHECK(t.cost >= 0.015);
  CHECK(t.cost < 1.0);
}

TEST_CASE("record keeps the best ok value") {
  SUBCASE("improvement") {
    History h;
    h.record(ok_trial(0.5));
    h.record(ok_trial(0.3));
    CHECK(h.best_value() == 0.3);
  }
  SUBCASE("failed trial leaves the best alone") {
    History h;
    h.record(ok_trial(0.5));
    h.record(failed_trial(-100.0));
    CHECK(h.best_value() == 0.5);
    CHECK(h.ok_count() == 1);
    CHECK(h.size() == 2);
  }
  SUBCASE("first ok trial") {
    History h;
    CHECK_FALSE(h.has_best());
    CHECK_THROWS(h.best());
    h.record(ok_trial(1.2));
    CHECK(h.best_value() == 1.2);
  }
  SUBCASE("ties keep the earliest trial") {
    History h;
    Trial a = ok_trial(1.0);
    a.assignment = {{"u", 0.1}};
    Trial b = ok_trial(1.0);
    b.assignment = {{"u", 0.9}};
    h.record(a);
    h.record(b);
    CHECK(h.best().assignment == a.assignment);
  }
}

TEST_CASE("failure penalty") {
  History h;
  CHECK(h.penalty() == 1.0);
  h.record(failed_trial(1.0));
  CHECK(h.penalty() == 1.0);
  h.record(ok_trial(1.0));
  CHECK(h.penalty() == doctest::Approx(1.0));
  h.record(ok_trial(3.0));
  CHECK(h.penalty() == doctest::Approx(3.2));
  h.record(ok_trial(-1.0));
  CHECK(h.penalty() == doctest::Approx(3.4));
}

TEST_CASE("best_so_far is the running minimum over ok trials") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> value(0.0, 1.0);
  std::bernoulli_distribution fails(0.2);
  History h;
  std::vector<double> ok_values;
  for (int i = 0; i < 300; ++i) {
    if (fails(gen)) {
      h.record(failed_trial(h.penalty()));
    } else {
      const double v = value(gen);
      ok_values.push_back(v);
      h.record(ok_trial(v));
    }
    const auto& bsf = h.best_so_far();
    REQUIRE(bsf.size() == h.size());
    if (ok_values.empty()) {
      CHECK_FALSE(bsf.back().has_value());
    } else {
      CHECK(*bsf.back() == *std::min_element(ok_values.begin(), ok_values.end()));
    }
    if (bsf.size() >= 2 && bsf[bsf.size() - 2]) CHECK(*bsf.back() <= *bsf[bsf.size() - 2]);
  }
  CHECK(h.ok_values() == ok_values);
}

TEST_CASE("deterministic evaluators repeat exactly") {
  const auto b = load_benchmark("hartmann6");
  const auto spec = benchmark_objective(b);
  Rng rng(4);
  for (const auto& a : sample_uniform(b.space, rng, 20)) {
    CHECK(evaluate(spec, a, 1.0, 1.0).value == evaluate(spec, a, 1.0, 1.0).value);
  }
}

TEST_CASE("cost model smoothing") {
  CostModel c;
  CHECK(c.alpha() == 0.3);
  CHECK(c.ema() == 0.0);
  CHECK_FALSE(c.observed());
  c.update(2.0);
  CHECK(c.ema() == 2.0);
  c.update(4.0);
  CHECK(c.ema() == doctest::Approx(2.6));

  CostModel first;
  first.update(5.0);
  CHECK(first.ema() == 5.0);
  CHECK_THROWS(first.update(-1.0));
  CHECK(first.ema() == 5.0);
  CHECK_THROWS(CostModel(0.0));
  CHECK_THROWS(CostModel(1.5));
}

TEST_CASE("subprocess evaluator speaks the line protocol") {
  const SearchSpace space({{"a", Domain::continuous(-5, 5)}, {"b", Domain::integer(0, 9)},
                           {"c", Domain::categorical({"p", "q"})}});
  const std::string exe = ECHO_OBJECTIVE_PATH;

  SUBCASE("sums numeric values on one long-lived child") {
    auto ev = std::make_shared<SubprocessEvaluator>(exe, "");
    ObjectiveSpec spec{space, ev, "", 10.0, BudgetMode::count};
    for (int i = 0; i < 5; ++i) {
      const Assignment a{{"a", 0.5 * i}, {"b", std::int64_t{i}}, {"c", std::string("q")}};
      const Trial t = evaluate(spec, a, 1.0, 99.0);
      CHECK(t.ok());
      CHECK(t.value == doctest::Approx(1.5 * i));
    }
    CHECK(ev->spawn_count() == 1);
  }

  SUBCASE("error responses are failed trials") {
    auto ev = std::make_shared<SubprocessEvaluator>(exe + " --error-on a", "");
    ObjectiveSpec spec{space, ev, "", 10.0, BudgetMode::count};
    const Trial bad = evaluate(spec, {{"a", 1.0}, {"b", std::int64_t{0}}, {"c", std::string("p")}}, 1.0, 42.0);
    CHECK(bad.status == TrialStatus::failed);
    CHECK(bad.value == 42.0);
    const Trial good = evaluate(spec, {{"a", -1.0}, {"b", std::int64_t{2}}, {"c", std::string("p")}}, 1.0, 42.0);
    CHECK(good.ok());
    CHECK(good.value == doctest::Approx(1.0));
    CHECK(ev->spawn_count() == 1);
  }

  SUBCASE("a crashed child is replaced") {
    auto ev = std::make_shared<SubprocessEvaluator>(exe + " --crash-after 2", "");
    ObjectiveSpec spec{space, ev, "", 10.0, BudgetMode::count};
    const Assignment a{{"a", 1.0}, {"b", std::int64_t{1}}, {"c", std::string("p")}};
    CHECK(evaluate(spec, a, 1.0, 9.0).ok());
    CHECK(evaluate(spec, a, 1.0, 9.0).ok());
    const Trial crashed = evaluate(spec, a, 1.0, 9.0);
    CHECK(crashed.status == TrialStatus::failed);
    CHECK(crashed.value == 9.0);
    const Trial after = evaluate(spec, a, 1.0, 9.0);
    CHECK(after.ok());
    CHECK(after.value == doctest::Approx(2.0));
    CHECK(ev->spawn_count() == 2);
  }

  SUBCASE("a slow child times out") {
    auto ev = std::make_shared<SubprocessEvaluator>(exe + " --sleep-ms 1000", "");
    ObjectiveSpec spec{space, ev, "", 0.1, BudgetMode::count};
    const Trial t = evaluate(spec, {{"a", 1.0}, {"b", std::int64_t{1}}, {"c", std::string("p")}}, 1.0, 5.0);
    CHECK(t.status == TrialStatus::timeout);
    CHECK(t.value == 5.0);
  }

  SUBCASE("a command that does not exist fails every trial") {
    auto ev = std::make_shared<SubprocessEvaluator>("/nonexistent/objective", "");
    ObjectiveSpec spec{space, ev, "", 5.0, BudgetMode::count};
    const Trial t = evaluate(spec, {{"a", 1.0}, {"b", std::int64_t{1}}, {"c", std::string("p")}}, 1.0, 5.0);
    CHECK(t.status == TrialStatus::failed);
  }
}
