#include "hgame/semantics.hpp"

namespace hgame {

Run Run::prefix(std::size_t n_steps) const {
  Run r{start, {}};
  r.steps.assign(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(std::min(n_steps, steps.size())));
  return r;
}

Configuration initial_configuration(const Game& g) {
  return {g.init(), std::vector<Rational>(g.dim(), Rational(0))};
}

Player owner(const Game& g, const Configuration& q) { return g.location(q.loc).owner; }

const std::string& observation(const Game& g, const Configuration& q) { return g.location(q.loc).obs; }

std::optional<Interval> delay_window(const Game& g, const Configuration& q, std::size_t edge) {
  const Edge& e = g.edge(edge);
  if (e.src != q.loc)
    return std::nullopt;
  const Location& l = g.location(q.loc);
  Interval w = Interval::ray_from(Rational(0));
  for (std::size_t x = 0; x < g.dim(); ++x) {
    const auto& c = e.guard.conjuncts[x];
    if (!c)
      continue;
    const Rational& f = l.flow[x];
    if (f == 0) {
      if (!c->contains(q.val[x]))
        return std::nullopt;
      continue;
    }
    // v + t·f ∈ [a, b]  ⇔  t ∈ ([a, b] − v) / f
    w = w.intersect(c->shifted_down(q.val[x]).divided_by(f));
    if (w.empty())
      return std::nullopt;
  }
  return w;
}

bool enabled(const Game& g, const Configuration& q, const Move& m) {
  if (m.edge >= g.edges().size() || m.delay < 0)
    return false;
  auto w = delay_window(g, q, m.edge);
  return w && w->contains(m.delay);
}

Configuration step(const Game& g, const Configuration& q, const Move& m) {
  if (!enabled(g, q, m))
    throw MoveNotEnabled("move (" + (m.edge < g.edges().size() ? g.edge(m.edge).id : std::to_string(m.edge)) +
                         ", " + m.delay.str() + ") not enabled at " + g.location_key(q.loc));
  const Edge& e = g.edge(m.edge);
  const Location& l = g.location(q.loc);
  Configuration r{e.dst, q.val};
  for (std::size_t x = 0; x < g.dim(); ++x)
    r.val[x] = e.reset.values[x] ? *e.reset.values[x] : q.val[x] + m.delay * l.flow[x];
  return r;
}

Run play(const Game& g, const Strategy& s1, const Strategy& s2, std::size_t k,
         const std::function<bool(const Run&)>& stop) {
  Run r{initial_configuration(g), {}};
  while (r.steps.size() < k) {
    if (stop && stop(r))
      break;
    const Configuration& q = r.last();
    const Strategy& s = owner(g, q) == Player::One ? s1 : s2;
    std::optional<Move> m = s ? s(r) : std::nullopt;
    if (!m)
      break;
    if (!enabled(g, q, *m))
      throw IllegalStrategyMove("strategy proposed a disabled move at " + g.location_key(q.loc));
    Configuration next = step(g, q, *m);
    r.steps.push_back({*m, std::move(next)});
  }
  return r;
}

Trace trace_of(const Game& g, const Run& r) {
  Trace t;
  t.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    t.push_back(observation(g, r.config(i)));
  return t;
}

} // namespace hgame
