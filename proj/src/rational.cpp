#include "hgame/rational.hpp"

#include <stdexcept>

namespace hgame {

Rational::Rational(long num, long den) : q_(num, den) {
  if (den == 0)
    throw std::domain_error("rational with zero denominator");
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

std::optional<Rational> Rational::parse_canonical(std::string_view text) {
  if (text.empty())
    return std::nullopt;
  for (char c : text)
    if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
      return std::nullopt;
  mpq_class q;
  std::string s(text);
  if (q.set_str(s, 10) != 0)
    return std::nullopt;
  if (q.get_den() == 0)
    return std::nullopt;
  q.canonicalize();
  if (q.get_str() != s)
    return std::nullopt;
  return Rational(std::move(q));
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Rational Rational::frac() const { return *this - Rational(mpq_class(floor())); }

long Rational::to_long() const {
  if (!is_integer() || !q_.get_num().fits_slong_p())
    throw std::range_error("rational " + str() + " is not a machine integer");
  return q_.get_num().get_si();
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.q_ == 0)
    throw std::domain_error("division of rational by zero");
  return Rational(mpq_class(a.q_ / b.q_));
}

std::size_t Rational::hash() const {
  // Only the low limbs are hashed; collisions are resolved by operator==.
  auto limb = [](const mpz_class& z) -> std::size_t {
    return mpz_size(z.get_mpz_t()) == 0 ? 0 : static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), 0));
  };
  std::size_t h = limb(q_.get_num()) * 1000003u ^ limb(q_.get_den());
  return sgn(q_) < 0 ? ~h : h;
}

mpz_class lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

} // namespace hgame
