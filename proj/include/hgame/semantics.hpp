#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgame/game.hpp"

namespace hgame {

/// A location index paired with an exact valuation of every variable.
struct Configuration {
  std::size_t loc = 0;
  std::vector<Rational> val;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// An edge taken after letting `delay` time units elapse.
struct Move {
  std::size_t edge = 0;
  Rational delay;
  friend bool operator==(const Move&, const Move&) = default;
};

struct Step {
  Move move;
  Configuration config;
};

/// A finite run; also used as the history a strategy is queried with.
struct Run {
  Configuration start;
  std::vector<Step> steps;

  const Configuration& last() const { return steps.empty() ? start : steps.back().config; }
  std::size_t size() const { return steps.size() + 1; } ///< number of configurations
  const Configuration& config(std::size_t i) const { return i == 0 ? start : steps[i - 1].config; }
  Run prefix(std::size_t n_steps) const;
};

using History = Run;
using Trace = std::vector<std::string>;

/// Maps a history ending in one of the player's configurations to a move,
/// or to nothing (the play halts).
using Strategy = std::function<std::optional<Move>(const History&)>;

struct MoveNotEnabled : std::logic_error {
  using std::logic_error::logic_error;
};
struct IllegalStrategyMove : std::logic_error {
  using std::logic_error::logic_error;
};

Configuration initial_configuration(const Game& g);
Player owner(const Game& g, const Configuration& q);
const std::string& observation(const Game& g, const Configuration& q);

/// Set of delays t ≥ 0 such that the valuation after t satisfies the guard of
/// `edge`: a closed interval, a ray [a, ∞), or nothing when empty.
std::optional<Interval> delay_window(const Game& g, const Configuration& q, std::size_t edge);

bool enabled(const Game& g, const Configuration& q, const Move& m);

/// Successor configuration. Throws MoveNotEnabled when the delay falls
/// outside the edge's window or the edge does not leave q's location.
Configuration step(const Game& g, const Configuration& q, const Move& m);

/// Outcome prefix of at most k steps. The owner of the current configuration
/// is asked for a move; the play halts early when it returns nothing or when
/// `stop` (if set) holds for the run so far.
Run play(const Game& g, const Strategy& s1, const Strategy& s2, std::size_t k,
         const std::function<bool(const Run&)>& stop = {});

Trace trace_of(const Game& g, const Run& r);

} // namespace hgame
