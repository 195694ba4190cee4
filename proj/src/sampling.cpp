#include "hgame/sampling.hpp"

#include <algorithm>

namespace hgame {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Rational far_end(const Interval& w, const DelayPick& opts) { return w.hi ? *w.hi : *w.lo + opts.ray_extent; }

mpz_class ceil_mul(const Rational& r, long d) { return -((-r * Rational(d)).floor()); }

} // namespace

Rational pick_delay(const Interval& window, std::mt19937_64& rng, const DelayPick& opts) {
  const Rational lo = *window.lo;
  const Rational hi = far_end(window, opts);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < opts.boundary_bias)
    return (window.hi && coin(rng) < 0.5) ? hi : lo;
  std::uniform_int_distribution<long> den_dist(1, std::max(1L, opts.max_den));
  const long d = den_dist(rng);
  const mpz_class k_lo = ceil_mul(lo, d);
  const mpz_class k_hi = (hi * Rational(d)).floor();
  if (k_lo > k_hi)
    return (lo + hi) / Rational(2);
  const mpz_class span = k_hi - k_lo;
  // Windows are small in practice; fall back to the midpoint for huge spans.
  if (!span.fits_slong_p())
    return (lo + hi) / Rational(2);
  std::uniform_int_distribution<long> k_dist(0, span.get_si());
  return Rational(mpq_class(mpz_class(k_lo + k_dist(rng)), mpz_class(d)));
}

std::vector<Rational> DelaySampler::delays(const Interval& window, std::mt19937_64& rng) const {
  const Rational lo = *window.lo;
  const Rational hi = far_end(window, pick);
  std::vector<Rational> out{lo, (lo + hi) / Rational(2), hi};
  for (std::size_t i = 0; i < random_per_window; ++i)
    out.push_back(pick_delay(window, rng, pick));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace hgame
