#include "hgame/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hgame/bisim.hpp"
#include "hgame/chain.hpp"
#include "hgame/game_io.hpp"
#include "hgame/solver.hpp"
#include "hgame/strategy.hpp"
#include "hgame/validate.hpp"

namespace hgame {

namespace {

struct CommandFailed : std::runtime_error {
  int code;
  CommandFailed(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CommandFailed(exit_code::Violation, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifact(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text))
    throw CommandFailed(exit_code::Violation, "cannot write " + path);
}

Game load_game(const std::string& path) { return parse_game(read_file(path)); }

std::string describe(const Violation& v) {
  std::string s = std::string(to_string(v.kind)) + " at " + v.where;
  if (!v.var.empty())
    s += " (" + v.var + ")";
  if (!v.message.empty())
    s += ": " + v.message;
  return s;
}

std::pair<bool, std::set<std::string>> parse_objective(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (colon == std::string::npos || (kind != "reach" && kind != "safe"))
    throw CommandFailed(exit_code::Usage, "objective must be reach:OBS or safe:OBS");
  auto obs = target_observations(text.substr(colon + 1));
  if (obs.empty())
    throw CommandFailed(exit_code::Usage, "objective names no observation");
  return {kind == "reach", obs};
}

nlohmann::json config_json(const Game& g, const Configuration& q) {
  nlohmann::json val = nlohmann::json::object();
  for (std::size_t x = 0; x < g.dim(); ++x)
    val[g.vars()[x]] = q.val[x].str();
  return {{"location", g.location_key(q.loc)},
          {"obs", observation(g, q)},
          {"owner", owner(g, q) == Player::One ? 1 : 2},
          {"valuation", val}};
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduction of initialized singular games to timed games, with strategy synthesis"};
  app.require_subcommand(1);

  std::string game_path, strat_path, output, to, objective;
  std::size_t samples = 50, depth = 8, steps = 10, plays = 20, max_nodes = 1'000'000;
  std::uint64_t seed = 1;
  bool full_product = false, serial = false;

  auto* validate = app.add_subcommand("validate", "check structural invariants");
  validate->add_option("game", game_path)->required();

  auto* classify = app.add_subcommand("classify", "print the most specific flavor");
  classify->add_option("game", game_path)->required();

  auto* transform = app.add_subcommand("transform", "emit a later stage of the reduction");
  transform->add_option("game", game_path)->required();
  transform->add_option("--to", to, "stopwatch|annotated-stopwatch|updatable|timed")
      ->required()
      ->check(CLI::IsMember({"stopwatch", "annotated-stopwatch", "updatable", "timed"}));
  transform->add_option("-o,--output", output);
  transform->add_flag("--full-product", full_product, "annotate every (location, f) pair");

  auto* check = app.add_subcommand("check-bisim", "sample the alternating bisimulations of the chain");
  check->add_option("game", game_path)->required();
  check->add_option("--samples", samples);
  check->add_option("--depth", depth);
  check->add_option("--seed", seed);
  check->add_flag("--serial", serial, "use the serial checker");

  auto* solve = app.add_subcommand("solve", "solve the timed game of the chain on the region graph");
  solve->add_option("game", game_path)->required();
  solve->add_option("--objective", objective)->required();
  solve->add_option("-o,--output", output);
  solve->add_option("--max-nodes", max_nodes);

  auto* pull = app.add_subcommand("pull-back", "tabulate the pulled-back strategy over bounded plays");
  pull->add_option("game", game_path)->required();
  pull->add_option("strategy", strat_path)->required();
  pull->add_option("-o,--output", output);
  pull->add_option("--steps", steps);
  pull->add_option("--plays", plays);
  pull->add_option("--seed", seed);

  auto* simulate = app.add_subcommand("simulate", "play a strategy against a seeded random opponent");
  simulate->add_option("game", game_path)->required();
  simulate->add_option("strategy", strat_path)->required();
  simulate->add_option("--seed", seed);
  simulate->add_option("--steps", steps);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty())
    rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::Success;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_code::Usage;
  }

  try {
    if (validate->parsed()) {
      const Game g = load_game(game_path);
      const auto vs = validate_game(g);
      for (const auto& v : vs)
        err << describe(v) << "\n";
      if (!vs.empty())
        return exit_code::Violation;
      out << "valid " << to_string(g.flavor()) << "\n";
      return exit_code::Success;
    }
    if (classify->parsed()) {
      out << to_string(classify_flavor(load_game(game_path))) << "\n";
      return exit_code::Success;
    }
    if (transform->parsed()) {
      const Chain c = Chain::build(load_game(game_path), {full_product});
      const Stage s = to == "stopwatch"             ? Stage::Stopwatch
                      : to == "annotated-stopwatch" ? Stage::Annotated
                      : to == "updatable"           ? Stage::Updatable
                                                    : Stage::Timed;
      write_artifact(output, emit_game(c.game(s)), out);
      return exit_code::Success;
    }
    if (check->parsed()) {
      ChainCheckOptions o;
      o.samples = samples;
      o.depth = depth;
      o.seed = seed;
      o.exec = serial ? Exec::Serial : Exec::Parallel;
      const Chain c = Chain::build(load_game(game_path));
      const ChainReport rep = verify_chain(c, o);
      for (const auto& w : rep.warnings)
        err << "warning: " << w << "\n";
      for (const auto& s : rep.stages) {
        out << s.stage << ": " << (s.passed() ? "pass" : "FAIL") << " pairs=" << s.pairs_passed << "/"
            << s.pairs_checked << " moves=" << s.moves_checked << "\n";
        for (const auto& f : s.failures)
          err << "  " << to_string(f.kind) << ": " << f.detail << "\n";
      }
      return rep.passed() ? exit_code::Success : exit_code::Violation;
    }
    if (solve->parsed()) {
      const auto [reach, obs] = parse_objective(objective);
      const Game source = load_game(game_path);
      const Chain c = Chain::build(source);
      const RegionGame rg = build_region_graph(*c.timed, {max_nodes});
      const Solution sol = reach ? solve_reachability(rg, obs) : solve_safety(rg, obs);
      const StrategyFile sf = make_strategy_file(source, *c.timed, rg, sol, objective);
      write_artifact(output, emit_strategy(sf, c.timed->vars()), out);
      err << "region nodes: " << rg.nodes.size() << "; player " << (sf.init_winning ? 1 : 2)
          << " wins from the initial configuration\n";
      return sf.init_winning ? exit_code::Success : exit_code::Violation;
    }
    if (pull->parsed()) {
      const Chain c = Chain::build(load_game(game_path));
      const StrategyFile sf = parse_strategy(read_file(strat_path), *c.timed);
      if (sf.game != game_hash(*c.timed))
        throw CommandFailed(exit_code::Violation, "strategy was computed for a different game");
      const Strategy sigma = pull_back_strategy(c, strategy_from_file(c.timed, sf));
      HistoryTable table;
      table.game = game_hash(*c.isr);
      const Strategy recorder = [&](const History& h) {
        auto m = sigma(h);
        if (m)
          table.entries[HistoryTable::key_of(h)] = *m;
        return m;
      };
      for (std::size_t p = 0; p < plays; ++p)
        play(*c.isr, recorder, random_strategy(c.isr, mix_seed(seed, p)), steps);
      write_artifact(output, emit_history_table(table, *c.isr), out);
      return exit_code::Success;
    }
    if (simulate->parsed()) {
      auto g = std::make_shared<const Game>(load_game(game_path));
      const std::string text = read_file(strat_path);
      const auto kind = nlohmann::json::parse(text).value("kind", std::string());
      Strategy sigma;
      if (kind == "history-table") {
        HistoryTable t = parse_history_table(text, *g);
        if (t.game != game_hash(*g))
          throw CommandFailed(exit_code::Violation, "strategy was recorded for a different game");
        sigma = strategy_from_table(std::move(t));
      } else if (const std::string h = game_hash(*g); nlohmann::json::parse(text).value("game", "") == h) {
        sigma = strategy_from_file(g, parse_strategy(text, *g));
      } else {
        const Chain c = Chain::build(*g);
        const StrategyFile sf = parse_strategy(text, *c.timed);
        if (sf.game != game_hash(*c.timed))
          throw CommandFailed(exit_code::Violation, "strategy was computed for a different game");
        sigma = pull_back_strategy(c, strategy_from_file(c.timed, sf));
      }
      const Run r = play(*g, sigma, random_strategy(g, seed), steps);
      out << nlohmann::json{{"step", 0}, {"config", config_json(*g, r.start)}}.dump() << "\n";
      for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const Step& s = r.steps[i];
        out << nlohmann::json{{"step", i + 1},
                              {"move", {{"edge", g->edge(s.move.edge).id}, {"delay", s.move.delay.str()}}},
                              {"config", config_json(*g, s.config)}}
                   .dump()
            << "\n";
      }
      return exit_code::Success;
    }
  } catch (const CommandFailed& e) {
    err << e.what() << "\n";
    return e.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::Violation;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::Violation;
  } catch (const InvalidGame& e) {
    for (const auto& v : e.violations)
      err << describe(v) << "\n";
    return exit_code::Violation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::Internal;
  }
  return exit_code::Usage;
}

} // namespace hgame
