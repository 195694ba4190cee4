#pragma once

#include "hgame/game.hpp"
#include "hgame/semantics.hpp"

namespace hgame {

/// Replaces every reset x := c by x := 0 and records c as a clock offset g in
/// the target location; guards are shifted down by the source offset.
Game to_timed(const Game& updatable);

/// Offset annotation of a timed-game location.
const std::vector<std::optional<Rational>>& clock_offsets(const Game& timed, std::size_t loc);

/// (l, v) ↦ ((l, g), v − g) for the timed location `timed_loc` whose base is l.
Configuration gamma2(const Game& timed, std::size_t timed_loc, const Configuration& q_u);
/// ((l, g), v) ↦ (l, v + g); `updatable` resolves the base location index.
Configuration gamma2_inv(const Game& timed, const Game& updatable, const Configuration& q_t);

} // namespace hgame
