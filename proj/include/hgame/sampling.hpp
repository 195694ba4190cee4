#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hgame/game.hpp"

namespace hgame {

/// splitmix64 finalizer; used to derive independent, reproducible seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0);

struct DelayPick {
  long max_den = 4;            ///< denominators of random delays are in [1, max_den]
  Rational ray_extent = 3;     ///< rays [a, ∞) are sampled within [a, a + ray_extent]
  double boundary_bias = 0.25; ///< probability of returning an endpoint exactly
};

/// Random delay inside a non-empty window.
Rational pick_delay(const Interval& window, std::mt19937_64& rng, const DelayPick& opts = {});

/// Delays tried per enabled edge by the bisimulation checker: the window's
/// endpoints and midpoint (rays use lo + ray_extent as their far end) plus
/// `random_per_window` random bounded-denominator delays.
struct DelaySampler {
  std::size_t random_per_window = 1;
  DelayPick pick{4, 3, 0.0};

  std::vector<Rational> delays(const Interval& window, std::mt19937_64& rng) const;
};

} // namespace hgame
