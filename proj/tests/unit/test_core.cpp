#include <doctest.h>

#include "builder.hpp"
#include "games.hpp"
#include "hgame/validate.hpp"

using namespace hgame;
using namespace hgame::testing;

TEST_CASE("rationals are canonical and exact") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -2).str() == "-1/2");
  CHECK(Rational(6, 3).str() == "2");
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).frac() == Rational(1, 2));
  CHECK_THROWS(Rational(1) / Rational(0));

  CHECK(Rational::parse_canonical("-1/2") == Rational(-1, 2));
  CHECK(Rational::parse_canonical("3") == Rational(3));
  CHECK(Rational::parse_canonical("0") == Rational(0));
  for (const char* bad : {"2/4", "+3", "1/-2", "06", "-0", "1/1", "", "1/0", "x", "3/", " 3"})
    CHECK_MESSAGE(!Rational::parse_canonical(bad), bad);
}

TEST_CASE("interval division swaps endpoints for negative divisors") {
  const Interval i = *I(2, 3);
  CHECK(i.divided_by(Rational(-1)) == *I(-3, -2));
  CHECK(i.divided_by(Rational(2)) == *I(R(1), R(3, 2)));
  CHECK(Interval::ray_from(R(1)).divided_by(R(-2)).lo == std::nullopt);
}

TEST_CASE("validate_game: initialization condition") {
  auto g = Builder(Flavor::ISR, {"x"})
               .loc("l", Player::One, "A", {R(2)})
               .loc("m", Player::One, "A", {R(0)})
               .edge("e", "l", "m", {I(0, 1)})
               .build();
  auto v = validate_game(g);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::InitializationBroken);
  CHECK(v[0].where == "e");
  CHECK(v[0].var == "x");

  auto ok = Builder(Flavor::ISR, {"x"})
                .loc("l", Player::One, "A", {R(2)})
                .loc("m", Player::Two, "B", {R(2)})
                .edge("e", "l", "m", {I(0, 1)})
                .edge("f", "m", "l", {I(0, 1)})
                .build();
  CHECK(validate_game(ok).empty());
}

TEST_CASE("validate_game: guard shape and initial location") {
  auto missing = Builder(Flavor::ISR, {"x", "y"})
                     .loc("l", Player::One, "A", {R(1), R(1)})
                     .edge("e", "l", "l", {I(0, 1), any})
                     .build();
  auto v = validate_game(missing);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::GuardNotTotal);

  Builder open(Flavor::ISR, {"x"});
  open.loc("l", Player::One, "A", {R(1)}).edge("e", "l", "l", {Interval::ray_from(R(0))});
  CHECK(validate_game(open.build()).at(0).kind == ViolationKind::NonCompactGuard);

  Builder p2(Flavor::ISR, {"x"});
  p2.loc("l", Player::Two, "A", {R(1)}).edge("e", "l", "l", {I(0, 1)});
  CHECK(validate_game(p2.build()).at(0).kind == ViolationKind::InitNotPlayerOne);

  CHECK(validate_game(worked_example()).empty());
  auto broken = validate_game(initialization_broken());
  REQUIRE(broken.size() == 1);
  CHECK(broken[0].kind == ViolationKind::InitializationBroken);
}

TEST_CASE("validate_game: flavor-specific checks") {
  Builder sw(Flavor::Stopwatch, {"x"});
  sw.loc("l", Player::One, "A", {R(2)}).edge("e", "l", "l", {I(0, 1)});
  CHECK(validate_game(sw.build()).at(0).kind == ViolationKind::FlowNotInFlavor);

  Builder t(Flavor::Timed, {"x"});
  t.loc("l", Player::One, "A").edge("e", "l", "l", {I(0, 1)}, {R(3)});
  CHECK(validate_game(t.build()).at(0).kind == ViolationKind::ResetNotInFlavor);
}

TEST_CASE("classify_flavor picks the most specific flavor") {
  auto timed = Builder(Flavor::ISR, {"x"}).loc("l", Player::One, "A", {R(1)}).edge("e", "l", "l", {I(0, 1)}, {R(0)});
  CHECK(classify_flavor(timed.build()) == Flavor::Timed);

  auto upd = Builder(Flavor::ISR, {"x"}).loc("l", Player::One, "A", {R(1)}).edge("e", "l", "l", {I(0, 1)}, {R(5)});
  CHECK(classify_flavor(upd.build()) == Flavor::Updatable);

  auto sw = Builder(Flavor::ISR, {"x", "y"})
                .loc("l", Player::One, "A", {R(1), R(0)})
                .edge("e", "l", "l", {I(0, 1), I(0, 1)});
  CHECK(classify_flavor(sw.build()) == Flavor::Stopwatch);

  CHECK(classify_flavor(worked_example()) == Flavor::ISR);
  CHECK_THROWS_AS(classify_flavor(initialization_broken()), InvalidGame);

  CHECK(flavor_refines(Flavor::Timed, Flavor::Updatable));
  CHECK(flavor_refines(Flavor::Timed, Flavor::ISR));
  CHECK_FALSE(flavor_refines(Flavor::Stopwatch, Flavor::Timed));
}

namespace {

Game timed_with_bounds(std::vector<Rational> bounds) {
  Builder b(Flavor::Timed, {"x"});
  b.loc("l", Player::One, "A");
  for (std::size_t i = 0; i + 1 < bounds.size(); i += 2)
    b.edge("e" + std::to_string(i), "l", "l", {I(bounds[i], bounds[i + 1])});
  return b.build();
}

} // namespace

TEST_CASE("scale_to_integers") {
  auto s = scale_to_integers(timed_with_bounds({R(1, 2), R(3, 2)}));
  CHECK(s.factor == 2);
  CHECK(s.game.edge(0).guard.conjuncts[0] == I(1, 3));

  auto id = timed_with_bounds({R(1), R(2)});
  auto s1 = scale_to_integers(id);
  CHECK(s1.factor == 1);
  CHECK(s1.game.data().edges[0].guard == id.edge(0).guard);

  auto s6 = scale_to_integers(timed_with_bounds({R(1, 3), R(1, 2)}));
  CHECK(s6.factor == 6);
  CHECK(s6.game.edge(0).guard.conjuncts[0] == I(2, 3));

  // dividing back by D restores every bound
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Game g = random_timed_game(seed);
    GameData d = g.data();
    for (Edge& e : d.edges)
      for (auto& c : e.guard.conjuncts)
        if (c)
          c = c->scaled(R(1, 3));
    Game third(d);
    auto sc = scale_to_integers(third);
    for (std::size_t e = 0; e < third.edges().size(); ++e)
      for (std::size_t x = 0; x < third.dim(); ++x)
        if (const auto& c = sc.game.edge(e).guard.conjuncts[x])
          CHECK(c->scaled(Rational(1) / Rational(mpq_class(sc.factor))) == *third.edge(e).guard.conjuncts[x]);
  }
  CHECK_THROWS(scale_to_integers(worked_example()));
}
