#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "hgame/chain.hpp"
#include "hgame/sampling.hpp"
#include "hgame/semantics.hpp"

namespace hgame {

/// Uniformly random enabled edge with a random bounded-denominator delay in
/// its window. The choice is a pure function of (seed, history length,
/// current location), so replaying a history reproduces it.
Strategy random_strategy(std::shared_ptr<const Game> g, std::uint64_t seed, const DelayPick& pick = {});

/// Translates a strategy of the timed game into one of the singular game:
/// lift the history, ask `timed_strategy`, reuse its delay and map the edge
/// back through provenance. Works for either player.
Strategy pull_back_strategy(const Chain& chain, Strategy timed_strategy);

/// The converse translation, through project_history: a singular-game
/// strategy played in the timed game.
Strategy push_forward_strategy(const Chain& chain, Strategy singular_strategy);

struct TraceInclusionReport {
  std::size_t plays = 0;
  std::size_t matched = 0;
  std::vector<Trace> unmatched;
  bool passed() const { return unmatched.empty(); }
};

/// Plays `sigma_b` in `g_b` against `trials` random player-2 strategies and
/// checks that every resulting trace is also produced in `g_a` under
/// `sigma_a` by some sampled player-2 behavior. Candidates in `g_a` are the
/// mirror of the player-2 strategy (when `mirror` is given) followed by
/// `trials` random player-2 strategies.
TraceInclusionReport check_trace_inclusion(std::shared_ptr<const Game> g_a, std::shared_ptr<const Game> g_b,
                                           const Strategy& sigma_a, const Strategy& sigma_b, std::size_t k,
                                           std::size_t trials, std::uint64_t seed,
                                           const std::function<Strategy(const Strategy&)>& mirror = {});

} // namespace hgame
