#include <doctest.h>

#include "builder.hpp"
#include "games.hpp"
#include "hgame/bisim.hpp"
#include "hgame/solver.hpp"
#include "hgame/strategy.hpp"
#include "hgame/to_stopwatch.hpp"

using namespace hgame;
using namespace hgame::testing;

TEST_CASE("lifting the empty history gives every initial configuration") {
  Chain c = Chain::build(worked_example());
  History h{initial_configuration(*c.isr), {}};
  LiftedHistory l = lift_history(c, h);
  for (Stage s : {Stage::Singular, Stage::Stopwatch, Stage::Annotated, Stage::Updatable, Stage::Timed}) {
    CHECK(l.at(s).steps.empty());
    CHECK(l.at(s).start == initial_configuration(c.game(s)));
  }
}

TEST_CASE("lifting one step with slope 2") {
  // x runs at slope 2 in l and stops in m, where it is re-injected as 4
  auto g = Builder(Flavor::ISR, {"x", "y"})
               .loc("l", Player::One, "A", {R(2), R(1)})
               .loc("m", Player::One, "B", {R(0), R(1)})
               .edge("e", "l", "m", {I(0, 10), I(0, 10)}, {R(4), keep})
               .edge("f", "m", "l", {I(0, 10), I(0, 10)}, {R(0), R(3)})
               .build();
  Chain c = Chain::build(g);
  History h{initial_configuration(g), {}};
  h.steps.push_back({{0, R(1)}, step(g, h.start, {0, R(1)})});
  h.steps.push_back({{1, R(1)}, step(g, h.steps[0].config, {1, R(1)})});
  LiftedHistory l = lift_history(c, h);
  CHECK(l.isr.steps[0].config.val == std::vector{R(4), R(1)});
  CHECK(l.stopwatch.steps[0].config.val == std::vector{R(4), R(1)});
  CHECK(l.updatable.steps[0].config.val == std::vector{R(4), R(1)});
  // timed: x was reset (offset 4), y was not (offset 0)
  CHECK(l.timed.steps[0].config.val == std::vector{R(0), R(1)});
  CHECK(l.timed.steps[1].config.val == std::vector{R(0), R(0)});
  CHECK(l.isr.steps[1].config.val == std::vector{R(0), R(3)});
  // after f the valuation is x=0 at slope 2, y=3
  CHECK(l.stopwatch.steps[1].config.val == std::vector{R(0), R(3)});
  for (Stage s : {Stage::Stopwatch, Stage::Annotated, Stage::Updatable, Stage::Timed})
    for (const Step& st : l.at(s).steps)
      CHECK(st.move.delay == R(1));

  // a valuation with x = 2 at slope 2 reads x* = 1 in the stopwatch game
  History h2{initial_configuration(g), {}};
  LiftedHistory l2 = lift_history(c, h2);
  CHECK(gamma1(g, {0, {R(2), R(0)}}).val == std::vector{R(1), R(0)});
  CHECK(l2.stopwatch.start.val == std::vector{R(0), R(0)});
}

TEST_CASE("lift then project round-trips; invalid histories are rejected") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Chain c = Chain::build(random_isr_game(seed));
    Run r = play(*c.isr, random_strategy(c.isr, seed), random_strategy(c.isr, seed + 77), 8);
    LiftedHistory l = lift_history(c, r);
    History back = project_history(c, l.timed);
    CHECK(back.start == r.start);
    REQUIRE(back.steps.size() == r.steps.size());
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      CHECK(back.steps[i].move == r.steps[i].move);
      CHECK(back.steps[i].config == r.steps[i].config);
    }
    BisimWitness e2e = compose(compose(gamma1_witness(c.isr, c.stopwatch),
                                       beta_witness(c.stopwatch, c.annotated, c.updatable)),
                               gamma2_witness(c.updatable, c.timed));
    for (std::size_t i = 0; i < l.isr.size(); ++i)
      CHECK(e2e.related(l.isr.config(i), l.timed.config(i)));
    if (!r.steps.empty()) {
      History bad = r;
      bad.steps[0].config.val[0] += R(1, 7);
      CHECK_THROWS_AS(lift_history(c, bad), InvalidHistory);
      History illegal = r;
      illegal.steps[0].move.delay = R(1000);
      if (!enabled(*c.isr, r.start, illegal.steps[0].move))
        CHECK_THROWS_AS(lift_history(c, illegal), InvalidHistory);
    }
  }
}

TEST_CASE("pull-back of a constant strategy") {
  Chain c = Chain::build(worked_example());
  const std::size_t e_t = c.timed->out_edges(c.timed->init()).front();
  Strategy sigma_t = [e_t](const History&) { return std::optional<Move>(Move{e_t, R(1)}); };
  Strategy sigma_s = pull_back_strategy(c, sigma_t);
  auto m = sigma_s(History{initial_configuration(*c.isr), {}});
  REQUIRE(m);
  CHECK(c.isr->edge(m->edge).id == "a");
  CHECK(m->delay == R(1));
  Strategy none = pull_back_strategy(c, [](const History&) { return std::optional<Move>(); });
  CHECK_FALSE(none(History{initial_configuration(*c.isr), {}}));
}

TEST_CASE("pull-back across the chain of a timed game keeps moves") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Chain c = Chain::build(random_timed_game(seed));
    Strategy sigma_t = random_strategy(c.timed, seed);
    Strategy sigma_s = pull_back_strategy(c, sigma_t);
    Run r = play(*c.isr, sigma_s, random_strategy(c.isr, seed + 1), 6);
    LiftedHistory l = lift_history(c, r);
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(l.timed.config(i).val == r.config(i).val);
      CHECK(l.timed.config(i).loc < c.timed->locations().size());
      History h = r.prefix(i);
      auto ms = sigma_s(h);
      auto mt = sigma_t(l.timed.prefix(i));
      REQUIRE(ms.has_value() == mt.has_value());
      if (ms) {
        CHECK(ms->delay == mt->delay);
        CHECK(c.isr->edge(ms->edge).id + "#" == c.timed->edge(mt->edge).id.substr(0, c.isr->edge(ms->edge).id.size() + 1));
      }
    }
  }
}

TEST_CASE("solver strategy pulled back wins the worked example") {
  Chain c = Chain::build(worked_example());
  auto rg = std::make_shared<const RegionGame>(build_region_graph(*c.timed));
  Solution sol = solve_reachability(*rg, {"GOAL"});
  REQUIRE(sol.init_winning(*rg));
  Strategy sigma_s = pull_back_strategy(c, region_strategy(rg, sol));
  auto reached = [&](const Run& r) { return observation(*c.isr, r.last()) == "GOAL"; };
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Run r = play(*c.isr, sigma_s, random_strategy(c.isr, seed), rg->nodes.size(), reached);
    CHECK(reached(r));
  }
  // first move leaves charge with a positive delay
  auto m = sigma_s(History{initial_configuration(*c.isr), {}});
  REQUIRE(m);
  CHECK(m->delay > 0);
}

TEST_CASE("trace inclusion") {
  // identity: a strategy against itself
  Chain c = Chain::build(random_timed_game(3));
  Strategy s = random_strategy(c.isr, 5);
  CHECK(check_trace_inclusion(c.isr, c.isr, s, s, 10, 10, 1).passed());

  // chain-related games: pulled-back strategy with mirrored opponents
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Chain k = Chain::build(seed == 0 ? worked_example() : random_isr_game(seed));
    Strategy sigma_t = random_strategy(k.timed, seed);
    Strategy sigma_s = pull_back_strategy(k, sigma_t);
    auto mirror = [&](const Strategy& env_s) { return push_forward_strategy(k, env_s); };
    auto rep = check_trace_inclusion(k.timed, k.isr, sigma_t, sigma_s, 10, 10, seed, mirror);
    CHECK(rep.passed());
    CHECK(rep.matched == 10);
  }

  // a strategy walking into a differently labelled location
  auto g = Builder(Flavor::Timed, {"x"})
               .loc("l", Player::One, "A")
               .loc("b", Player::One, "B")
               .loc("c", Player::One, "C")
               .edge("to_b", "l", "b", {I(0, 1)})
               .edge("to_c", "l", "c", {I(0, 1)})
               .build();
  auto gp = std::make_shared<const Game>(g);
  Strategy go_b = [](const History& h) { return h.steps.empty() ? std::optional<Move>(Move{0, R(0)}) : std::nullopt; };
  Strategy go_c = [](const History& h) { return h.steps.empty() ? std::optional<Move>(Move{1, R(0)}) : std::nullopt; };
  auto rep = check_trace_inclusion(gp, gp, go_b, go_c, 3, 4, 1);
  CHECK_FALSE(rep.passed());
  CHECK(rep.unmatched.size() == 4);
  CHECK(rep.unmatched[0] == Trace{"A", "C"});
}
