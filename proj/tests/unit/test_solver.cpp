#include <doctest.h>

#include <random>

#include "builder.hpp"
#include "games.hpp"
#include "oracle.hpp"
#include "hgame/chain.hpp"
#include "hgame/solver.hpp"
#include "hgame/strategy.hpp"

using namespace hgame;
using namespace hgame::testing;

TEST_CASE("regions of one clock with constant 1") {
  const std::vector<long> M{1};
  auto rs = time_successors(region_of({R(0)}, M), M);
  REQUIRE(rs.size() == 4);
  CHECK(rs[0] == region_of({R(0)}, M));
  CHECK(rs[1] == region_of({R(1, 2)}, M));
  CHECK(rs[2] == region_of({R(1)}, M));
  CHECK(rs[3] == region_of({R(7, 3)}, M));
  CHECK(is_above(rs[3], 0, M));
  CHECK(time_successor(rs[3], M) == rs[3]);
  CHECK(region_of({R(1, 3)}, M) == region_of({R(2, 3)}, M));

  auto g = Builder(Flavor::Timed, {"x"})
               .loc("l", Player::One, "A")
               .edge("e", "l", "l", {I(0, 1)})
               .edge("f", "l", "l", {any})
               .build();
  CHECK(build_region_graph(g).nodes.size() == 4);
}

TEST_CASE("two-clock fractional order") {
  const std::vector<long> M{2, 2};
  Region a = region_of({R(1, 3), R(2, 3)}, M), b = region_of({R(2, 3), R(1, 3)}, M);
  CHECK(a != b);
  CHECK(region_of({R(1, 4), R(1, 2)}, M) == a);
  CHECK(region_of({R(1, 2), R(1, 2)}, M) != a);
  // y reaches 1 first
  CHECK(time_successor(a, M) == region_of({R(2, 3), R(1)}, M));
  CHECK(reset_region(a, {1}) == region_of({R(1, 3), R(0)}, M));
  Guard gx{{I(0, 1), any}};
  CHECK(satisfies(a, gx, M));
  CHECK_FALSE(satisfies(region_of({R(3, 2), R(0)}, M), gx, M));
}

TEST_CASE("zero clocks give one region per location") {
  auto g = Builder(Flavor::Timed, {})
               .loc("a", Player::One, "A")
               .loc("b", Player::Two, "B")
               .loc("c", Player::One, "GOAL")
               .edge("ab", "a", "b", {})
               .edge("bc", "b", "c", {})
               .edge("ba", "b", "a", {})
               .build();
  RegionGame rg = build_region_graph(g);
  CHECK(rg.nodes.size() == 3);
  // player 2 loops forever through a
  CHECK_FALSE(solve_reachability(rg, {"GOAL"}).init_winning(rg));
}

TEST_CASE("point guard is met exactly") {
  auto g = Builder(Flavor::Timed, {"x"})
               .loc("l", Player::One, "A")
               .loc("goal", Player::One, "GOAL")
               .edge("e", "l", "goal", {I(1, 1)})
               .build();
  auto rg = std::make_shared<const RegionGame>(build_region_graph(g));
  Solution sol = solve_reachability(*rg, {"GOAL"});
  REQUIRE(sol.init_winning(*rg));
  CHECK(sol.rank[rg->init] == 1);
  auto m = region_strategy(rg, sol)(History{initial_configuration(g), {}});
  REQUIRE(m);
  CHECK(m->delay == R(1));
}

TEST_CASE("initial location already in the target") {
  auto g = Builder(Flavor::Timed, {"x"}).loc("l", Player::One, "GOAL").build();
  RegionGame rg = build_region_graph(g);
  Solution sol = solve_reachability(rg, {"GOAL"});
  CHECK(sol.init_winning(rg));
  CHECK(sol.rank[rg.init] == 0);
}

TEST_CASE("player 2 escapes to a trap") {
  Builder b(Flavor::Timed, {"x"});
  b.loc("l", Player::One, "A")
      .loc("m", Player::Two, "A")
      .loc("goal", Player::One, "GOAL")
      .loc("trap", Player::One, "A")
      .edge("lm", "l", "m", {I(0, 3)})
      .edge("win", "m", "goal", {I(0, 3)});
  {
    RegionGame rg = build_region_graph(b.build());
    CHECK(solve_reachability(rg, {"GOAL"}).init_winning(rg));
  }
  b.edge("escape", "m", "trap", {I(1, 2)});
  {
    RegionGame rg = build_region_graph(b.build());
    Solution sol = solve_reachability(rg, {"GOAL"});
    // past x = 2 the escape is closed: player 1 waits before handing over
    CHECK(sol.init_winning(rg));
    auto m = region_strategy(std::make_shared<const RegionGame>(rg), sol)(History{initial_configuration(rg.scaled), {}});
    REQUIRE(m);
    CHECK(m->delay > 2);
  }
  b.edge("escape2", "m", "trap", {I(2, 3)});
  {
    RegionGame rg = build_region_graph(b.build());
    CHECK_FALSE(solve_reachability(rg, {"GOAL"}).init_winning(rg));
  }
}

TEST_CASE("deadlocked player-2 location is lost for reachability") {
  auto g = Builder(Flavor::Timed, {"x"})
               .loc("l", Player::One, "A")
               .loc("m", Player::Two, "A")
               .edge("lm", "l", "m", {I(0, 2)})
               .build();
  RegionGame rg = build_region_graph(g);
  CHECK_FALSE(solve_reachability(rg, {"GOAL"}).init_winning(rg));
}

TEST_CASE("worked example is won by player 1") {
  Chain c = Chain::build(worked_example());
  RegionGame rg = build_region_graph(*c.timed);
  Solution sol = solve_reachability(rg, {"GOAL"});
  CHECK(sol.init_winning(rg));
}

TEST_CASE("safety") {
  auto g = Builder(Flavor::Timed, {"x"})
               .loc("l", Player::One, "A")
               .loc("m", Player::Two, "A")
               .loc("bad", Player::One, "BAD")
               .loc("rest", Player::One, "A")
               .edge("lm", "l", "m", {I(0, 2)})
               .edge("lbad", "l", "bad", {I(0, 2)})
               .edge("mbad", "m", "bad", {I(1, 2)})
               .edge("ml", "m", "l", {I(0, 3)})
               .edge("lrest", "l", "rest", {I(1, 1)})
               .build();
  RegionGame rg = build_region_graph(g);
  Solution sol = solve_safety(rg, {"A"});
  // the deadlock in rest is safe; l must wait for x = 1 to get there
  REQUIRE(sol.init_winning(rg));
  const RegionNode& init = rg.nodes[rg.init];
  CHECK(g.edge(init.moves[sol.strategy.choice.at(rg.init)].edge).id == "lrest");
  for (std::size_t i = 0; i < rg.nodes.size(); ++i)
    if (g.location(rg.nodes[i].loc).id.base == "rest")
      CHECK(sol.winning[i]);
  // past x = 1 every move from l is unsafe
  auto late = rg.node_of({0, {R(3, 2)}});
  if (late)
    CHECK_FALSE(sol.winning[*late]);
  Solution all = solve_safety(rg, {"A", "BAD"});
  for (bool w : all.winning)
    CHECK(w);
  for (std::size_t i = 0; i < rg.nodes.size(); ++i)
    if (g.location(rg.nodes[i].loc).obs == "BAD")
      CHECK_FALSE(sol.winning[i]);
  // player 2 in m can wait until x = 1 and leave
  auto m0 = rg.node_of({1, {R(0)}});
  REQUIRE(m0);
  CHECK_FALSE(sol.winning[*m0]);
}

TEST_CASE("concretize_delay") {
  const std::vector<long> M1{1};
  CHECK(concretize_delay(M1, 1, {R(1, 2)}, region_of({R(1)}, M1)) == R(1, 2));
  CHECK(concretize_delay(M1, 1, {R(1, 2)}, region_of({R(1, 2)}, M1)) == R(0));
  CHECK(concretize_delay(M1, 1, {R(1, 3)}, region_of({R(5)}, M1)) == R(7, 6));
  CHECK_FALSE(concretize_delay(M1, 1, {R(1, 2)}, region_of({R(0)}, M1)));
  // scaled by 2: valuation 1/4 reads 1/2
  CHECK(concretize_delay(M1, 2, {R(1, 4)}, region_of({R(1)}, M1)) == R(1, 4));

  const std::vector<long> M2{1, 1};
  CHECK(concretize_delay(M2, 1, {R(1, 3), R(0)}, region_of({R(2, 3), R(1, 3)}, M2)) == R(1, 3));
  CHECK(concretize_delay(M2, 1, {R(1, 3), R(0)}, region_of({R(1), R(2, 3)}, M2)) == R(2, 3));
}

TEST_CASE("region graph agrees with concrete moves") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = std::make_shared<const Game>(random_timed_game(seed));
    RegionGame rg = build_region_graph(*g);
    Run r = play(*g, random_strategy(g, seed), random_strategy(g, seed + 9), 6);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Configuration& q = r.config(i);
      auto n = rg.node_of(q);
      REQUIRE(n);
      const RegionNode& node = rg.nodes[*n];
      // every concrete move lands in a successor through the same edge
      for (std::size_t e : g->out_edges(q.loc))
        if (auto w = delay_window(*g, q, e)) {
          const Rational t = pick_delay(*w, rng);
          auto s = rg.node_of(step(*g, q, {e, t}));
          REQUIRE(s);
          CHECK(std::any_of(node.moves.begin(), node.moves.end(),
                            [&](const RegionMove& m) { return m.edge == e && m.succ == *s; }));
        }
      // every region move is realizable from q
      for (const RegionMove& m : node.moves) {
        Move mv = concretize_move(rg, q, m);
        REQUIRE(enabled(*g, q, mv));
        CHECK(rg.node_of(step(*g, q, mv)) == m.succ);
      }
    }
  }
}

TEST_CASE("reachability solution is a fixpoint and matches the brute-force oracle") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Game g = random_timed_game(seed);
    RegionGame rg = build_region_graph(g);
    Solution sol = solve_reachability(rg, {"GOAL"});
    for (std::size_t i = 0; i < rg.nodes.size(); ++i) {
      const RegionNode& n = rg.nodes[i];
      if (g.location(n.loc).obs == "GOAL") {
        CHECK(sol.rank[i] == 0);
        continue;
      }
      const bool one = g.location(n.loc).owner == Player::One;
      auto win = [&](const RegionMove& m) { return bool(sol.winning[m.succ]); };
      const bool expect = one ? std::any_of(n.moves.begin(), n.moves.end(), win)
                              : !n.moves.empty() && std::all_of(n.moves.begin(), n.moves.end(), win);
      CHECK(sol.winning[i] == expect);
      if (one && sol.winning[i]) {
        REQUIRE(sol.strategy.choice.contains(i));
        CHECK(sol.rank[n.moves[sol.strategy.choice.at(i)].succ] < sol.rank[i]);
      }
    }
    CHECK(sol.init_winning(rg) == granular_reach_winner(g, {"GOAL"}, rg.nodes.size()));

    RegionOptions global;
    global.global_max = true;
    RegionGame rg2 = build_region_graph(g, global);
    CHECK(rg2.nodes.size() >= rg.nodes.size());
    CHECK(solve_reachability(rg2, {"GOAL"}).init_winning(rg2) == sol.init_winning(rg));
  }
}

TEST_CASE("node budget") {
  RegionOptions o;
  o.max_nodes = 2;
  CHECK_THROWS_AS(build_region_graph(*Chain::build(worked_example()).timed, o), RegionGameTooLarge);
}

TEST_CASE("safety: a forced step into an unsafe sink loses") {
  auto g = Builder(Flavor::Timed, {"x"})
               .loc("l", Player::One, "A")
               .loc("m", Player::Two, "A")
               .loc("bad", Player::One, "BAD")
               .edge("lm", "l", "m", {I(0, 1)})
               .edge("mbad", "m", "bad", {I(0, 5)})
               .build();
  RegionGame rg = build_region_graph(g);
  Solution sol = solve_safety(rg, {"A"});
  CHECK_FALSE(sol.winning[*rg.node_of({1, {R(0)}})]);
  // l has a single move and it leads into m
  CHECK_FALSE(sol.init_winning(rg));
}
