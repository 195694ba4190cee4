#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "games.hpp"
#include "hgame/chain.hpp"
#include "hgame/cli.hpp"
#include "hgame/game_io.hpp"
#include "hgame/strategy.hpp"
#include "hgame/validate.hpp"

using namespace hgame;
using namespace hgame::testing;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("hgame_io_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name, std::ios::binary) << text;
    return (dir / name).string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "hgame");
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("game documents round-trip") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Game g = seed == 0 ? worked_example() : random_isr_game(seed);
    const std::string text = emit_game(g);
    Game back = parse_game(text);
    CHECK(emit_game(back) == text);
    CHECK(game_hash(back) == game_hash(g));
    Chain c = Chain::build(g);
    for (Stage s : {Stage::Stopwatch, Stage::Annotated, Stage::Updatable, Stage::Timed}) {
      const std::string t = emit_game(c.game(s));
      Game r = parse_game(t);
      CHECK(emit_game(r) == t);
      CHECK(r.flavor() == c.game(s).flavor());
    }
  }
}

TEST_CASE("parser rejects malformed documents with a path") {
  auto j = game_to_json(worked_example());
  auto bad_rational = j;
  bad_rational["edges"][0]["guard"]["x"][1] = "6/2";
  try {
    game_from_json(bad_rational);
    FAIL("accepted 6/2");
  } catch (const ParseError& e) {
    CHECK(e.path == "$.edges[0].guard.x[1]");
  }
  auto extra = j;
  extra["edges"][1]["weight"] = 3;
  CHECK_THROWS_AS(game_from_json(extra), ParseError);
  auto top = j;
  top["comment"] = "x";
  CHECK_THROWS_AS(game_from_json(top), ParseError);
  CHECK_THROWS_AS(parse_game("{"), ParseError);
  CHECK_THROWS_AS(parse_game("[]"), ParseError);

  auto dangling = j;
  dangling["edges"][0]["dst"] = "nowhere";
  auto v = validate_game(game_from_json(dangling));
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].kind == ViolationKind::DanglingEndpoint);
}

TEST_CASE("strategy files round-trip") {
  Chain c = Chain::build(worked_example());
  auto rg = std::make_shared<const RegionGame>(build_region_graph(*c.timed));
  Solution sol = solve_reachability(*rg, {"GOAL"});
  StrategyFile sf = make_strategy_file(*c.isr, *c.timed, *rg, sol, "reach:GOAL");
  CHECK(sf.init_winning);
  CHECK_FALSE(sf.entries.empty());
  const std::string text = emit_strategy(sf, c.timed->vars());
  StrategyFile back = parse_strategy(text, *c.timed);
  CHECK(emit_strategy(back, c.timed->vars()) == text);

  // the file executes like the in-memory strategy
  Strategy a = strategy_from_file(c.timed, back), b = region_strategy(rg, sol);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Run ra = play(*c.timed, a, random_strategy(c.timed, seed), 8);
    Run rb = play(*c.timed, b, random_strategy(c.timed, seed), 8);
    CHECK(trace_of(*c.timed, ra) == trace_of(*c.timed, rb));
    CHECK(ra.last() == rb.last());
  }
}

TEST_CASE("history tables round-trip") {
  Game g = worked_example();
  HistoryTable t;
  t.game = game_hash(g);
  History h{initial_configuration(g), {}};
  t.entries[HistoryTable::key_of(h)] = Move{0, Rational(1, 2)};
  h.steps.push_back({{0, Rational(1, 2)}, step(g, h.start, {0, Rational(1, 2)})});
  t.entries[HistoryTable::key_of(h)] = Move{1, Rational(0)};
  const std::string text = emit_history_table(t, g);
  HistoryTable back = parse_history_table(text, g);
  CHECK(back.entries == t.entries);
  CHECK(emit_history_table(back, g) == text);
  Strategy s = strategy_from_table(back);
  CHECK(s(h) == std::optional<Move>(Move{1, Rational(0)}));
  CHECK_FALSE(s(History{initial_configuration(g), {Step{{0, Rational(1)}, {}}}}));
}

TEST_CASE("command line") {
  Scratch tmp;
  const std::string ok = tmp.write("ok.json", emit_game(worked_example()));
  const std::string broken = tmp.write("broken.json", emit_game(initialization_broken()));
  const std::string garbage = tmp.write("garbage.json", "{\"flavor\": ");

  auto v = run({"validate", ok});
  CHECK(v.code == exit_code::Success);
  v = run({"validate", broken});
  CHECK(v.code == exit_code::Violation);
  CHECK(v.err.find("a") != std::string::npos);
  CHECK(run({"validate", garbage}).code == exit_code::Violation);
  CHECK(run({"validate", tmp.path("missing.json")}).code == exit_code::Violation);
  CHECK(run({"frobnicate"}).code == exit_code::Usage);
  CHECK(run({"solve", ok, "--objective", "win:GOAL"}).code == exit_code::Usage);

  CHECK(run({"classify", ok}).out == "isr\n");
  REQUIRE(run({"transform", ok, "--to", "timed", "-o", tmp.path("t.json")}).code == 0);
  CHECK(run({"classify", tmp.path("t.json")}).out == "timed\n");
  for (const char* to : {"stopwatch", "annotated-stopwatch", "updatable"})
    CHECK(run({"validate", tmp.write(std::string(to) + ".json", run({"transform", ok, "--to", to}).out)}).code == 0);
  CHECK(run({"transform", ok, "--to", "linear"}).code == exit_code::Usage);

  auto chk = run({"check-bisim", ok, "--samples", "20", "--seed", "3"});
  CHECK(chk.code == 0);
  CHECK(chk.out == run({"check-bisim", ok, "--samples", "20", "--seed", "3", "--serial"}).out);

  auto s1 = run({"solve", ok, "--objective", "reach:GOAL", "-o", tmp.path("s.json")});
  CHECK(s1.code == 0);
  const std::string strat = tmp.read("s.json");
  CHECK_FALSE(strat.empty());
  CHECK(run({"solve", ok, "--objective", "reach:GOAL"}).out == strat);
  CHECK(run({"solve", ok, "--objective", "reach:NOWHERE"}).code == exit_code::Violation);

  auto p1 = run({"pull-back", ok, tmp.path("s.json"), "-o", tmp.path("h.json"), "--plays", "5"});
  CHECK(p1.code == 0);
  auto sim = run({"simulate", ok, tmp.path("h.json"), "--seed", "4", "--steps", "6"});
  CHECK(sim.code == 0);
  CHECK(sim.out == run({"simulate", ok, tmp.path("h.json"), "--seed", "4", "--steps", "6"}).out);
  auto direct = run({"simulate", ok, tmp.path("s.json"), "--seed", "4", "--steps", "6"});
  CHECK(direct.code == 0);
  CHECK(direct.out.find("GOAL") != std::string::npos);
  CHECK(sim.out.find("\"step\":0") != std::string::npos);
  CHECK(run({"simulate", tmp.path("t.json"), tmp.path("s.json")}).code == 0);
  CHECK(run({"simulate", ok, garbage}).code == exit_code::Violation);
  CHECK(run({"pull-back", broken, tmp.path("s.json")}).code == exit_code::Violation);
}
