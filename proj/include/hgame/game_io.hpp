#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgame/game.hpp"
#include "hgame/solver.hpp"

namespace hgame {

/// Malformed document; `path` names the offending field, e.g.
/// "edges[2].guard.x[0]".
struct ParseError : std::runtime_error {
  std::string path;
  ParseError(std::string path_, const std::string& msg)
      : std::runtime_error(path_ + ": " + msg), path(std::move(path_)) {}
};

/// Strict reader: unknown fields and non-canonical rationals are rejected.
/// Structural problems (dangling endpoints, missing conjuncts...) are left to
/// validate_game.
Game parse_game(const std::string& text);
Game game_from_json(const nlohmann::json& j);

/// Deterministic text with sorted keys and canonical rationals.
std::string emit_game(const Game& g);
nlohmann::json game_to_json(const Game& g);

/// Hex SHA-256 of emit_game(g).
std::string game_hash(const Game& g);

nlohmann::json region_to_json(const Region& r, std::span<const std::string> vars,
                              const std::vector<long>& max_const);
Region region_from_json(const nlohmann::json& j, std::span<const std::string> vars,
                        const std::vector<long>& max_const);

/// Positional region strategy of a solved timed game.
struct StrategyEntry {
  std::string location; ///< canonical location key
  Region region;
  Region target;        ///< time successor the delay must reach
  std::string edge;
  std::string note;
};

struct StrategyFile {
  std::string game;      ///< hash of the timed game the entries refer to
  std::string source;    ///< hash of the game the solver was given
  std::string objective; ///< "reach:OBS" or "safe:OBS"
  bool init_winning = false;
  mpz_class scale = 1;
  std::vector<long> max_const;
  std::vector<StrategyEntry> entries;
};

StrategyFile make_strategy_file(const Game& source, const Game& timed, const RegionGame& rg, const Solution& sol,
                                const std::string& objective);
std::string emit_strategy(const StrategyFile& s, std::span<const std::string> vars);
StrategyFile parse_strategy(const std::string& text, const Game& timed);

/// Executes a strategy file on `timed`: look up the entry of the current
/// (location, region) and realize it with concretize_delay.
Strategy strategy_from_file(std::shared_ptr<const Game> timed, const StrategyFile& s);

/// Finite table of player-1 decisions indexed by the move sequence of the
/// history, recorded from bounded plays.
struct HistoryTable {
  using Key = std::vector<std::pair<std::size_t, Rational>>; ///< (edge, delay) per step
  std::string game;
  std::map<Key, Move> entries;

  static Key key_of(const History& h);
};

std::string emit_history_table(const HistoryTable& t, const Game& g);
HistoryTable parse_history_table(const std::string& text, const Game& g);
/// Looks the history's moves up in the table; no move when absent.
Strategy strategy_from_table(HistoryTable t);

} // namespace hgame
