#pragma once

#include "hgame/game.hpp"
#include "hgame/semantics.hpp"

namespace hgame {

struct AnnotateOptions {
  /// Emit every (location, f) pair of the product instead of the pairs
  /// reachable from the initial annotation. Extra pairs get no edges beyond
  /// those the construction gives them.
  bool full_product = false;
};

/// Frozen-value annotation f' of the target of an edge leaving a location
/// annotated with f.
std::vector<std::optional<Rational>> next_frozen(const Game& stopwatch, const Edge& e,
                                                 const std::vector<std::optional<Rational>>& f);

/// Annotation of the initial location: 0 for stopped variables, absent for
/// running ones.
std::vector<std::optional<Rational>> initial_frozen(const Game& stopwatch);

/// Pairs each location with the value its stopped variables are frozen at.
Game annotate_resets(const Game& stopwatch, const AnnotateOptions& opts = {});

/// Turns every stopwatch into a clock. Edges re-inject frozen values through
/// resets; guard conjuncts on variables frozen at the source are evaluated
/// statically (removed when satisfied, edge dropped otherwise).
Game to_updatable(const Game& annotated);

/// Same construction without the static guard evaluation; kept so tests can
/// exhibit why it is needed.
Game to_updatable_keep_guards(const Game& annotated);

/// (l, v) related to ((l, f), v̄) iff v̄ = v and the base locations agree.
bool beta_contains(const Game& stopwatch, const Configuration& q_w, const Game& updatable, const Configuration& q_u);

} // namespace hgame
