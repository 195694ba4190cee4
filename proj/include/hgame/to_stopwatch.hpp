#pragma once

#include "hgame/game.hpp"
#include "hgame/semantics.hpp"

namespace hgame {

/// Rescales every non-zero slope to 1. Guards are divided by the source
/// location's slope, reset values by the target location's slope. Locations
/// keep their ids and indices; edges keep their ids and point back to the
/// source edge through provenance.
Game to_stopwatch(const Game& isr);

/// (l, v) ↦ (l, v*) with v*(x) = v(x) / flow(l, x) for moving variables.
Configuration gamma1(const Game& isr, const Configuration& q);
/// Inverse of gamma1, multiplying back by the singular game's slopes.
Configuration gamma1_inv(const Game& isr, const Configuration& q);

} // namespace hgame
