#include "hgame/to_stopwatch.hpp"

#include "hgame/validate.hpp"

namespace hgame {

Game to_stopwatch(const Game& isr) {
  if (auto v = validate_game(isr); !v.empty())
    throw InvalidGame(std::move(v));
  GameData d = isr.data();
  d.flavor = Flavor::Stopwatch;
  for (Location& l : d.locations)
    for (Rational& f : l.flow)
      f = f == 0 ? Rational(0) : Rational(1);
  for (Edge& e : d.edges) {
    const Location& src = isr.location(e.src);
    const Location& dst = isr.location(e.dst);
    for (std::size_t x = 0; x < d.vars.size(); ++x) {
      auto& c = e.guard.conjuncts[x];
      if (c && src.flow[x] != 0)
        c = c->divided_by(src.flow[x]);
      auto& r = e.reset.values[x];
      if (r && dst.flow[x] != 0)
        r = *r / dst.flow[x];
    }
    e.provenance = e.id;
  }
  return Game(std::move(d));
}

Configuration gamma1(const Game& isr, const Configuration& q) {
  Configuration r = q;
  const Location& l = isr.location(q.loc);
  for (std::size_t x = 0; x < r.val.size(); ++x)
    if (l.flow[x] != 0)
      r.val[x] = q.val[x] / l.flow[x];
  return r;
}

Configuration gamma1_inv(const Game& isr, const Configuration& q) {
  Configuration r = q;
  const Location& l = isr.location(q.loc);
  for (std::size_t x = 0; x < r.val.size(); ++x)
    if (l.flow[x] != 0)
      r.val[x] = q.val[x] * l.flow[x];
  return r;
}

} // namespace hgame
