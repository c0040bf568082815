#include <doctest.h>

#include <random>

#include "blockopt/bandit_blocks.hpp"
#include "blockopt/benchmarks.hpp"
#include "blockopt/estimators.hpp"
#include "blockopt/joint_block.hpp"
#include "oracles.hpp"

using namespace blockopt;

namespace {

// Child block whose loss follows a script indexed by its own call count.
// It evaluates nothing: every trial is the defaults of its free space merged
// with whatever is currently pinned.
class ScriptedBlock final : public Block {
 public:
  using Script = std::function<double(std::size_t call, const Assignment& full)>;

  ScriptedBlock(std::shared_ptr<const ObjectiveSpec> obj, Subgoal g, SearchSpace free,
                std::shared_ptr<RunContext> ctx, const BlockParams& p, Script script)
      : Block(std::move(obj), std::move(g), std::move(free), std::move(ctx), p), script_(std::move(script)) {}

 protected:
  std::vector<Trial> step() override {
    Trial t;
    t.assignment = merge(subgoal_.fixed, default_assignment(free_space_));
    t.value = script_(calls_++, t.assignment);
    t.cost = 1.0;
    context_->spent += 1.0;
    ++context_->leaf_evaluations;
    return {t};
  }

 private:
  Script script_;
  std::size_t calls_ = 0;
};

History history_of(const std::vector<double>& values, const std::vector<bool>& ok = {}) {
  History h;
  for (std::size_t i = 0; i < values.size(); ++i) {
    Trial t;
    t.value = values[i];
    t.cost = 1.0;
    if (!ok.empty() && !ok[i]) t.status = TrialStatus::failed;
    h.record(t);
  }
  return h;
}

CostModel unit_cost() {
  CostModel c;
  c.update(1.0);
  return c;
}

std::shared_ptr<const ObjectiveSpec> constant_objective(SearchSpace space, double v = 0.0) {
  return std::make_shared<const ObjectiveSpec>(make_objective(std::move(space), [v](const Assignment&, double) { return v; }));
}

BlockParams serial_params() {
  BlockParams p;
  p.parallel = false;
  return p;
}

SearchSpace three_arm_space() {
  return SearchSpace({{"arm", Domain::categorical({"a", "b", "c"})}, {"x", Domain::continuous(0, 1)}});
}

}  // namespace

TEST_CASE("EU bracket from windowed improvements") {
  SUBCASE("worked example") {
    // ten steps alternating 0.01 / 0.03 (mean 0.02, population sd 0.01)
    // ending at loss 0.40
    std::vector<double> values = {0.60};
    for (int i = 0; i < 10; ++i) values.push_back(values.back() - (i % 2 == 0 ? 0.01 : 0.03));
    const auto h = history_of(values);
    REQUIRE(h.best_value() == doctest::Approx(0.40));
    const auto eu = get_eu_estimate(h, unit_cost(), 10.0);
    CHECK(eu.lower == doctest::Approx(-0.40).epsilon(1e-12));
    CHECK(eu.upper == doctest::Approx(-0.10).epsilon(1e-12));
  }
  SUBCASE("flat history") {
    const auto eu = get_eu_estimate(history_of({0.5, 0.7, 0.6, 0.9}), unit_cost(), 100.0);
    CHECK(eu.lower == -0.5);
    CHECK(eu.upper == -0.5);
  }
  SUBCASE("single ok trial") {
    const auto eu = get_eu_estimate(history_of({0.3, 9.0}, {true, false}), unit_cost(), 100.0);
    CHECK(eu.lower == -0.3);
    CHECK(eu.upper == -0.3);
  }
  SUBCASE("nothing succeeded") {
    CHECK_THROWS(get_eu_estimate(History{}, unit_cost(), 1.0));
    CHECK_THROWS(get_eu_estimate(history_of({1.0}, {false}), unit_cost(), 1.0));
  }
  SUBCASE("only the last window counts") {
    // a big early drop followed by ten flat steps leaves nothing to extrapolate
    std::vector<double> values = {10.0, 1.0};
    for (int i = 0; i < 10; ++i) values.push_back(1.0);
    const auto eu = get_eu_estimate(history_of(values), unit_cost(), 50.0);
    CHECK(eu.upper == eu.lower);
  }
  SUBCASE("cost scales the step count") {
    std::vector<double> values = {1.0, 0.9, 0.8};
    CostModel c;
    c.update(2.0);
    const auto eu = get_eu_estimate(history_of(values), c, 10.0);
    // k = floor(10 / 2) = 5, rate = 0.1 + 0
    CHECK(eu.upper == doctest::Approx(-0.8 + 0.5));
  }
}

TEST_CASE("EU bounds are ordered and grow with the budget") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution fails(0.15);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> values;
    std::vector<bool> ok;
    const int n = 2 + rep % 30;
    for (int i = 0; i < n; ++i) {
      values.push_back(noise(gen));
      ok.push_back(i == 0 || !fails(gen));
    }
    const auto h = history_of(values, ok);
    CostModel c;
    c.update(0.5 + rep * 0.01);
    double last_upper = -std::numeric_limits<double>::infinity();
    for (double K : {0.0, 0.3, 1.0, 2.0, 7.5, 40.0, 1000.0}) {
      const auto eu = get_eu_estimate(h, c, K);
      CHECK(eu.lower == -h.best_value());
      CHECK(eu.lower <= eu.upper);
      CHECK(eu.upper >= last_upper);
      last_upper = eu.upper;
    }
  }
}

TEST_CASE("EUI is the mean incumbent improvement per step") {
  CHECK(get_eui_estimate(history_of({1.0, 0.7, 0.6, 0.6})) == doctest::Approx(0.4 / 3.0).epsilon(1e-12));
  CHECK(get_eui_estimate(history_of({1.0})) == 0.0);
  CHECK(get_eui_estimate(history_of({5.0, 1.0}, {false, true})) == 0.0);
  CHECK_THROWS(get_eui_estimate(History{}));
  CHECK_THROWS(get_eui_estimate(history_of({1.0, 2.0}, {false, false})));

  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-5, 5);
  std::bernoulli_distribution fails(0.2);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> values;
    std::vector<bool> ok;
    const int n = 1 + rep % 40;
    for (int i = 0; i < n; ++i) {
      values.push_back(u(gen));
      ok.push_back(i == 0 || !fails(gen));
    }
    const auto steps = oracle::step_improvements(values, ok);
    double expected = 0.0;
    for (double s : steps) expected += s;
    if (!steps.empty()) expected /= static_cast<double>(steps.size());
    const double eui = get_eui_estimate(history_of(values, ok));
    CHECK(eui >= 0.0);
    CHECK(eui == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dominated arms are eliminated") {
  CHECK(eliminate_dominated({{0.2, 0.4}, {0.5, 0.9}, {0.45, 0.6}}) == std::set<std::size_t>{0});
  CHECK(eliminate_dominated({{0.3, 0.5}, {0.3, 0.5}, {0.3, 0.5}}).empty());
  CHECK(eliminate_dominated({{0.1, 0.2}}).empty());
  CHECK(eliminate_dominated({}).empty());
  // touching brackets do not eliminate
  CHECK(eliminate_dominated({{0.1, 0.5}, {0.5, 0.7}}).empty());
}

TEST_CASE("elimination matches brute-force pairwise comparison") {
  std::mt19937_64 gen(44);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> width(0, 0.5);
  std::uniform_int_distribution<int> arms(1, 8);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<EUBound> bounds(static_cast<std::size_t>(arms(gen)));
    for (auto& b : bounds) {
      b.lower = u(gen);
      b.upper = b.lower + (rep % 5 == 0 ? 0.0 : width(gen));
    }
    std::set<std::size_t> expected;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      for (std::size_t j = 0; j < bounds.size(); ++j) {
        if (i != j && bounds[i].upper < bounds[j].lower) expected.insert(i);
      }
    }
    const auto got = eliminate_dominated(bounds);
    CHECK(got == expected);
    std::size_t top = 0;
    for (std::size_t i = 1; i < bounds.size(); ++i) {
      if (bounds[i].upper > bounds[top].upper) top = i;
    }
    CHECK_FALSE(got.contains(top));
    CHECK(got.size() < bounds.size());
  }
}

TEST_CASE("conditioning steps every active arm L times") {
  const auto space = three_arm_space();
  auto obj = constant_objective(space);
  auto ctx = std::make_shared<RunContext>();
  std::vector<ScriptedBlock*> children;
  const ArmFactory make = [&](const std::string& label, const Subgoal& g, const SearchSpace& free) {
    const double base = label == "a" ? 0.5 : label == "b" ? 0.4 : 0.3;
    auto child = std::make_unique<ScriptedBlock>(obj, g, free, ctx, serial_params(),
                                                 [base](std::size_t call, const Assignment&) {
                                                   return base + 0.01 * static_cast<double>(call % 3);
                                                 });
    children.push_back(child.get());
    return child;
  };
  ConditioningBlock block(obj, {}, space, ctx, serial_params(), "arm", make);
  REQUIRE(block.arms().size() == 3);
  CHECK(block.min_trials_for_elimination() == 10);
  CHECK(block.arms()[1].block->subgoal().fixed.at("arm") == Value(std::string("b")));

  const auto trials = block.do_next();
  CHECK(trials.size() == 15);
  CHECK(ctx->leaf_evaluations == 15);
  for (auto* c : children) CHECK(c->do_next_calls() == 5);
  // round robin: a b c a b c ...
  for (std::size_t i = 0; i < trials.size(); ++i) {
    CHECK(std::get<std::string>(trials[i].assignment.at("arm")) == std::string(1, static_cast<char>('a' + i % 3)));
  }
  CHECK(block.current_best().value == doctest::Approx(0.3));
  CHECK(std::get<std::string>(block.current_best().assignment.at("arm")) == "c");
}

TEST_CASE("deterministic arms collapse to the best one") {
  // utilities a: 1.0, b: 0.2, c: 0.1 (loss is the negated utility)
  const auto space = three_arm_space();
  auto obj = constant_objective(space);
  auto make_for = [&](std::shared_ptr<RunContext> ctx) {
    return ArmFactory([obj, ctx](const std::string& label, const Subgoal& g, const SearchSpace& free) {
      const double loss = label == "a" ? -1.0 : label == "b" ? -0.2 : -0.1;
      return std::make_unique<ScriptedBlock>(obj, g, free, ctx, serial_params(),
                                             [loss](std::size_t, const Assignment&) { return loss; });
    });
  };

  SUBCASE("gate lowered to one invocation's worth of trials") {
    auto ctx = std::make_shared<RunContext>();
    auto p = serial_params();
    p.elimination_min_trials = 5;
    ConditioningBlock block(obj, {}, space, ctx, p, "arm", make_for(ctx));
    block.do_next();
    CHECK(block.active_labels() == std::vector<std::string>{"a"});
  }
  SUBCASE("default gate waits for 2L ok trials per arm") {
    auto ctx = std::make_shared<RunContext>();
    ConditioningBlock block(obj, {}, space, ctx, serial_params(), "arm", make_for(ctx));
    block.do_next();
    CHECK(block.active_count() == 3);
    block.do_next();
    CHECK(block.active_labels() == std::vector<std::string>{"a"});
    // eliminated arms are never stepped again
    const auto b_calls = block.arms()[1].block->do_next_calls();
    const auto c_calls = block.arms()[2].block->do_next_calls();
    for (int i = 0; i < 3; ++i) CHECK(block.do_next().size() == 5);
    CHECK(block.arms()[1].block->do_next_calls() == b_calls);
    CHECK(block.arms()[2].block->do_next_calls() == c_calls);
    CHECK(block.arms()[0].block->do_next_calls() == 25);
    CHECK(block.current_best().value == -1.0);
  }
}

TEST_CASE("a single arm never eliminates") {
  const SearchSpace space({{"arm", Domain::categorical({"only"})}, {"x", Domain::continuous(0, 1)}});
  auto obj = constant_objective(space);
  auto ctx = std::make_shared<RunContext>();
  ConditioningBlock block(obj, {}, space, ctx, serial_params(), "arm",
                          [&](const std::string&, const Subgoal& g, const SearchSpace& free) {
                            return std::make_unique<JointBlock>(obj, g, free, ctx, serial_params(), 1);
                          });
  for (int i = 0; i < 4; ++i) CHECK(block.do_next().size() == 5);
  CHECK(block.active_count() == 1);
}

TEST_CASE("conditioning current_best") {
  const SearchSpace space({{"arm", Domain::categorical({"a", "b"})}, {"x", Domain::continuous(0, 1)}});
  auto obj = constant_objective(space);

  SUBCASE("best over arms") {
    auto ctx = std::make_shared<RunContext>();
    ConditioningBlock block(obj, {}, space, ctx, serial_params(), "arm",
                            [&](const std::string& label, const Subgoal& g, const SearchSpace& free) {
                              const double v = label == "a" ? 0.4 : 0.1;
                              return std::make_unique<ScriptedBlock>(obj, g, free, ctx, serial_params(),
                                                                     [v](std::size_t, const Assignment&) { return v; });
                            });
    CHECK_THROWS_AS(block.current_best(), std::logic_error);
    block.do_next();
    const auto best = block.current_best();
    CHECK(best.value == 0.1);
    CHECK(std::get<std::string>(best.assignment.at("arm")) == "b");
  }

  SUBCASE("eliminated arms still count") {
    // both arms are flat and a is worse, so a goes after one invocation;
    // current_best must still agree with a scan over every arm.
    auto ctx = std::make_shared<RunContext>();
    BlockParams p = serial_params();
    p.elimination_min_trials = 5;
    ConditioningBlock block(obj, {}, space, ctx, p, "arm",
                            [&](const std::string& label, const Subgoal& g, const SearchSpace& free) {
                              ScriptedBlock::Script s = label == "a"
                                  ? ScriptedBlock::Script([](std::size_t, const Assignment&) { return 2.0; })
                                  : ScriptedBlock::Script([](std::size_t, const Assignment&) { return 1.0; });
                              return std::make_unique<ScriptedBlock>(obj, g, free, ctx, p, s);
                            });
    block.do_next();
    CHECK(block.active_labels() == std::vector<std::string>{"b"});
    double brute = std::numeric_limits<double>::infinity();
    for (const auto& arm : block.arms()) brute = std::min(brute, arm.block->history().best_value());
    CHECK(block.current_best().value == brute);
  }
}

TEST_CASE("numeric conditioning splits the range into arms") {
  const SearchSpace space({{"v", Domain::continuous(0, 3)}, {"x", Domain::continuous(0, 1)}});
  auto obj = std::make_shared<const ObjectiveSpec>(make_objective(space, [](const Assignment& a, double) {
    return std::get<double>(a.at("v")) + std::get<double>(a.at("x"));
  }));
  auto ctx = std::make_shared<RunContext>();
  ConditioningBlock block(obj, {}, space, ctx, serial_params(), "v", {1.0, 2.0},
                          [&](const std::string&, const Subgoal& g, const SearchSpace& free) {
                            return std::make_unique<JointBlock>(obj, g, free, ctx, serial_params(), 3);
                          });
  REQUIRE(block.arms().size() == 3);
  CHECK(block.arms()[0].label == "[0,1)");
  CHECK(block.arms()[2].label == "[2,3]");
  for (int i = 0; i < 3; ++i) block.do_next();
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& t : block.arms()[k].block->history().trials()) {
      const double v = std::get<double>(t.assignment.at("v"));
      CHECK(v >= static_cast<double>(k));
      if (k < 2) CHECK(v < static_cast<double>(k + 1));
    }
  }
  CHECK_THROWS_AS(ConditioningBlock(obj, {}, space, ctx, serial_params(), "v", [&](const std::string&, const Subgoal& g,
                                                                                 const SearchSpace& free) {
    return std::make_unique<JointBlock>(obj, g, free, ctx, serial_params(), 3);
  }),
                  SpaceError);
}

TEST_CASE("set_var re-pins fixed variables") {
  const SearchSpace space({{"y", Domain::continuous(0, 1)}, {"z", Domain::continuous(0, 1)}});
  std::vector<Assignment> seen;
  auto obj = std::make_shared<const ObjectiveSpec>(make_objective(space, [&](const Assignment& a, double) {
    seen.push_back(a);
    return 0.0;
  }));
  auto ctx = std::make_shared<RunContext>();
  JointBlock block(obj, Subgoal{{{"y", 0.5}}}, SearchSpace({{"z", Domain::continuous(0, 1)}}), ctx,
                   serial_params(), 2);
  block.set_var({{"y", 0.2}});
  block.do_next();
  CHECK(std::get<double>(seen.back().at("y")) == 0.2);

  const auto before = block.subgoal();
  const auto size = block.history().size();
  block.set_var({{"y", 0.2}});
  CHECK(block.subgoal().fixed == before.fixed);
  CHECK(block.history().size() == size);

  CHECK_THROWS_AS(block.set_var({{"z", 0.3}}), SpaceError);
  CHECK_THROWS_AS(block.set_var({{"w", 0.3}}), SpaceError);
  CHECK_THROWS_AS(block.set_var({{"y", 7.0}}), SpaceError);
  // a failed set_var leaves the pins untouched
  CHECK(block.subgoal().fixed == before.fixed);
}

namespace {

struct AltFixture {
  SearchSpace space{{{"y", Domain::continuous(-1, 1)}, {"z", Domain::continuous(-1, 1)}}};
  std::shared_ptr<const ObjectiveSpec> obj;
  std::shared_ptr<RunContext> ctx = std::make_shared<RunContext>();
  BlockParams params = serial_params();

  explicit AltFixture(FunctionEvaluator::Fn fn)
      : obj(std::make_shared<const ObjectiveSpec>(make_objective(space, std::move(fn)))) {}

  BlockFactory joint(std::uint64_t seed) {
    return [this, seed](const Subgoal& g, const SearchSpace& free) {
      return std::make_unique<JointBlock>(obj, g, free, ctx, params, seed);
    };
  }

  std::unique_ptr<AlternatingBlock> make() {
    return std::make_unique<AlternatingBlock>(obj, Subgoal{}, space, ctx, params, std::vector<std::string>{"y"},
                                              std::vector<std::string>{"z"}, joint(1), joint(2));
  }
};

double sphere(const Assignment& a, double) {
  const double y = std::get<double>(a.at("y"));
  const double z = std::get<double>(a.at("z"));
  return y * y + z * z;
}

}  // namespace

TEST_CASE("alternating init and stepping") {
  AltFixture f(sphere);
  auto block = f.make();
  CHECK_FALSE(block->initialized());
  CHECK(f.ctx->leaf_evaluations == 0);
  // children start pinned at the midpoints of the other side
  CHECK(block->b1().subgoal().fixed.at("z") == Value(0.0));
  CHECK(block->b2().subgoal().fixed.at("y") == Value(0.0));

  const auto init = block->do_next();
  CHECK(init.size() == 10);
  CHECK(f.ctx->leaf_evaluations == 10);
  CHECK(block->initialized());
  CHECK(block->b1().history().size() == 5);
  CHECK(block->b2().history().size() == 5);

  double init_min = std::numeric_limits<double>::infinity();
  for (const auto& t : init) init_min = std::min(init_min, t.value);
  CHECK(block->current_best().value == init_min);

  // after init each child is pinned to the other's current best
  CHECK(block->b1().subgoal().fixed.at("z") == block->b2().current_best().assignment.at("z"));
  CHECK(block->b2().subgoal().fixed.at("y") == block->b1().current_best().assignment.at("y"));

  double last = block->current_best().value;
  for (int i = 0; i < 15; ++i) {
    CHECK(block->do_next().size() == 1);
    CHECK(block->current_best().value <= last);
    last = block->current_best().value;
  }
  CHECK(f.ctx->leaf_evaluations == 25);
}

TEST_CASE("alternating steps the child with the larger EUI, B1 on ties") {
  SUBCASE("rule holds at every step") {
    AltFixture f([](const Assignment& a, double) {
      const double y = std::get<double>(a.at("y"));
      const double z = std::get<double>(a.at("z"));
      return std::abs(y - 0.3) + 3.0 * (z + 0.4) * (z + 0.4);
    });
    auto block = f.make();
    block->do_next();
    for (int i = 0; i < 30; ++i) {
      const double d1 = block->b1().has_best() ? block->b1().get_eui() : 0.0;
      const double d2 = block->b2().has_best() ? block->b2().get_eui() : 0.0;
      const auto n1 = block->b1().history().size();
      const auto n2 = block->b2().history().size();
      const Trial t = block->do_next().front();
      if (d1 >= d2) {
        CHECK(block->b1().history().size() == n1 + 1);
        CHECK(block->b2().history().size() == n2);
        // the stepped child evaluated under the other's best
        CHECK(t.assignment.at("z") == block->b2().current_best().assignment.at("z"));
      } else {
        CHECK(block->b2().history().size() == n2 + 1);
        CHECK(block->b1().history().size() == n1);
        CHECK(t.assignment.at("y") == block->b1().current_best().assignment.at("y"));
      }
    }
  }

  SUBCASE("flat objective ties forever and B1 is always stepped") {
    AltFixture f([](const Assignment&, double) { return 1.0; });
    auto block = f.make();
    block->do_next();
    for (int i = 0; i < 10; ++i) block->do_next();
    CHECK(block->b1().history().size() == 15);
    CHECK(block->b2().history().size() == 5);
  }

  SUBCASE("scripted improvements pick the faster child") {
    const SearchSpace space({{"y", Domain::continuous(0, 1)}, {"z", Domain::continuous(0, 1)}});
    auto obj = constant_objective(space);
    auto run = [&](double rate1, double rate2) {
      auto ctx = std::make_shared<RunContext>();
      auto scripted = [&, ctx](double rate) {
        return BlockFactory([obj, ctx, rate](const Subgoal& g, const SearchSpace& free) {
          return std::make_unique<ScriptedBlock>(obj, g, free, ctx, serial_params(),
                                                 [rate](std::size_t call, const Assignment&) {
                                                   return 10.0 - rate * static_cast<double>(call);
                                                 });
        });
      };
      AlternatingBlock block(obj, {}, space, ctx, serial_params(), {"y"}, {"z"}, scripted(rate1), scripted(rate2));
      block.do_next();
      CHECK(block.b1().get_eui() == doctest::Approx(rate1));
      CHECK(block.b2().get_eui() == doctest::Approx(rate2));
      block.do_next();
      return std::make_pair(block.b1().history().size(), block.b2().history().size());
    };
    CHECK(run(0.2, 0.05) == std::make_pair<std::size_t, std::size_t>(6, 5));
    CHECK(run(0.05, 0.2) == std::make_pair<std::size_t, std::size_t>(5, 6));
    CHECK(run(0.1, 0.1) == std::make_pair<std::size_t, std::size_t>(6, 5));
  }
}

TEST_CASE("alternating partition validation") {
  const SearchSpace space({{"y", Domain::continuous(0, 1)}, {"z", Domain::continuous(0, 1)}, {"w", Domain::continuous(0, 1)}});
  auto obj = constant_objective(space);
  auto ctx = std::make_shared<RunContext>();
  const BlockFactory joint = [&](const Subgoal& g, const SearchSpace& free) {
    return std::make_unique<JointBlock>(obj, g, free, ctx, serial_params(), 1);
  };
  auto make = [&](std::vector<std::string> y, std::vector<std::string> z) {
    return AlternatingBlock(obj, {}, space, ctx, serial_params(), std::move(y), std::move(z), joint, joint);
  };
  CHECK_NOTHROW(make({"y", "w"}, {"z"}));
  CHECK_THROWS_AS(make({"y"}, {"z"}), SpaceError);
  CHECK_THROWS_AS(make({"y", "z"}, {"z", "w"}), SpaceError);
  CHECK_THROWS_AS(make({}, {"y", "z", "w"}), SpaceError);
  CHECK_THROWS_AS(make({"y", "q"}, {"z", "w"}), SpaceError);
}

TEST_CASE("alternating current_best") {
  const SearchSpace space({{"y", Domain::continuous(0, 1)}, {"z", Domain::continuous(0, 1)}});
  auto obj = constant_objective(space);
  auto ctx = std::make_shared<RunContext>();
  auto scripted = [&](std::vector<double> values) {
    return BlockFactory([obj, ctx, values](const Subgoal& g, const SearchSpace& free) {
      return std::make_unique<ScriptedBlock>(obj, g, free, ctx, serial_params(),
                                             [values](std::size_t call, const Assignment&) { return values[call % values.size()]; });
    });
  };
  SUBCASE("B2 strictly better") {
    AlternatingBlock block(obj, {}, space, ctx, serial_params(), {"y"}, {"z"}, scripted({0.3}), scripted({0.25}));
    CHECK_THROWS_AS(block.current_best(), std::logic_error);
    block.do_next();
    CHECK(block.current_best().value == 0.25);
  }
  SUBCASE("only B1 has trials") {
    BlockParams p = serial_params();
    AlternatingBlock block(obj, {}, space, ctx, p, {"y"}, {"z"}, scripted({0.3}), scripted({0.1}));
    ctx->budget_total = ctx->spent + 1.0;
    block.do_next();
    CHECK(block.b2().history().size() == 0);
    CHECK(block.current_best().value == 0.3);
  }
}

TEST_CASE("set_var on composite blocks reaches every child") {
  const SearchSpace space({{"c", Domain::categorical({"p", "q"})}, {"y", Domain::continuous(0, 1)},
                           {"z", Domain::continuous(0, 1)}});
  auto obj = constant_objective(space);
  auto ctx = std::make_shared<RunContext>();
  const BlockFactory joint = [&](const Subgoal& g, const SearchSpace& free) {
    return std::make_unique<JointBlock>(obj, g, free, ctx, serial_params(), 1);
  };
  const Subgoal g{{{"c", std::string("p")}}};
  AlternatingBlock block(obj, g, substitute(space, g), ctx, serial_params(), {"y"}, {"z"}, joint, joint);
  block.set_var({{"c", std::string("q")}});
  const auto trials = block.do_next();
  for (const auto& t : trials) CHECK(std::get<std::string>(t.assignment.at("c")) == "q");
}
