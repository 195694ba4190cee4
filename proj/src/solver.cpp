#include "hgame/solver.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <sstream>

namespace hgame {

namespace {

// Renumbers positive fractional ranks to 1..k keeping their order.
void compact(Region& r) {
  std::set<int> used;
  for (int f : r.frac)
    if (f > 0)
      used.insert(f);
  std::map<int, int> to;
  int k = 0;
  for (int f : used)
    to[f] = ++k;
  for (int& f : r.frac)
    if (f > 0)
      f = to[f];
}

long to_long_checked(const mpz_class& z) {
  if (!z.fits_slong_p())
    throw std::overflow_error("clock constant out of range");
  return z.get_si();
}

} // namespace

bool is_above(const Region& r, std::size_t x, const std::vector<long>& max_const) {
  return r.ipart[x] > max_const[x];
}

Region region_of(const std::vector<Rational>& val, const std::vector<long>& max_const) {
  const std::size_t n = val.size();
  Region r{std::vector<long>(n), std::vector<int>(n, 0)};
  std::vector<Rational> fracs;
  for (std::size_t x = 0; x < n; ++x) {
    if (val[x] > Rational(max_const[x])) {
      r.ipart[x] = max_const[x] + 1;
      r.frac[x] = -1;
      continue;
    }
    r.ipart[x] = to_long_checked(val[x].floor());
    if (val[x].frac().sign() != 0)
      fracs.push_back(val[x].frac());
  }
  std::sort(fracs.begin(), fracs.end());
  fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
  for (std::size_t x = 0; x < n; ++x)
    if (r.frac[x] == 0 && val[x].frac().sign() != 0)
      r.frac[x] = static_cast<int>(std::lower_bound(fracs.begin(), fracs.end(), val[x].frac()) - fracs.begin()) + 1;
  return r;
}

Region time_successor(const Region& r, const std::vector<long>& max_const) {
  Region s = r;
  bool any_zero = false, any_bounded = false;
  int top = 0;
  for (std::size_t x = 0; x < r.frac.size(); ++x) {
    if (is_above(r, x, max_const))
      continue;
    any_bounded = true;
    any_zero = any_zero || r.frac[x] == 0;
    top = std::max(top, r.frac[x]);
  }
  if (!any_bounded)
    return s;
  for (std::size_t x = 0; x < r.frac.size(); ++x) {
    if (is_above(r, x, max_const))
      continue;
    if (any_zero) {
      if (r.frac[x] > 0)
        s.frac[x] = r.frac[x] + 1;
      else if (r.ipart[x] == max_const[x])
        s.ipart[x] = max_const[x] + 1, s.frac[x] = -1;
      else
        s.frac[x] = 1;
    } else if (r.frac[x] == top) {
      s.ipart[x] = r.ipart[x] + 1;
      s.frac[x] = 0;
    }
  }
  compact(s);
  return s;
}

std::vector<Region> time_successors(const Region& r, const std::vector<long>& max_const) {
  std::vector<Region> out{r};
  for (;;) {
    Region s = time_successor(out.back(), max_const);
    if (s == out.back())
      return out;
    out.push_back(std::move(s));
  }
}

bool satisfies(const Region& r, const Guard& g, const std::vector<long>& max_const) {
  for (std::size_t x = 0; x < g.conjuncts.size(); ++x) {
    const auto& c = g.conjuncts[x];
    if (!c)
      continue;
    if (is_above(r, x, max_const)) {
      // every bound on x is at most M_x, so only a ray can hold
      if (c->hi)
        return false;
      continue;
    }
    const Rational i(r.ipart[x]);
    if (c->lo && *c->lo > i)
      return false;
    const Rational top = r.frac[x] == 0 ? i : i + Rational(1);
    if (c->hi && *c->hi < top)
      return false;
  }
  return true;
}

Region reset_region(const Region& r, const std::vector<std::size_t>& clocks) {
  Region s = r;
  for (std::size_t x : clocks) {
    s.ipart[x] = 0;
    s.frac[x] = 0;
  }
  compact(s);
  return s;
}

std::string region_str(const Region& r, std::span<const std::string> vars, const std::vector<long>& max_const) {
  std::ostringstream os;
  int classes = 0;
  for (std::size_t x = 0; x < r.ipart.size(); ++x) {
    if (x)
      os << ',';
    if (is_above(r, x, max_const))
      os << vars[x] << '>' << max_const[x];
    else if (r.frac[x] == 0)
      os << vars[x] << '=' << r.ipart[x];
    else
      os << vars[x] << "∈(" << r.ipart[x] << ',' << r.ipart[x] + 1 << ')';
    classes = std::max(classes, r.frac[x]);
  }
  if (classes > 1) {
    os << ';';
    for (int k = 1; k <= classes; ++k) {
      if (k > 1)
        os << '<';
      bool first = true;
      for (std::size_t x = 0; x < r.frac.size(); ++x)
        if (r.frac[x] == k) {
          os << (first ? "" : "=") << vars[x];
          first = false;
        }
    }
  }
  return os.str();
}

std::optional<std::size_t> RegionGame::node_of(const Configuration& q) const {
  std::vector<Rational> v;
  const Rational d{mpq_class(factor)};
  for (const Rational& x : q.val)
    v.push_back(x * d);
  auto it = index.find({q.loc, region_of(v, max_const)});
  if (it == index.end())
    return std::nullopt;
  return it->second;
}

RegionGame build_region_graph(const Game& timed, const RegionOptions& opts) {
  ScaledGame sg = scale_to_integers(timed);
  RegionGame rg{std::move(sg.game), sg.factor, {}, {}, 0, {}};
  const Game& g = rg.scaled;
  rg.max_const.assign(g.dim(), 0);
  for (const Edge& e : g.edges())
    for (std::size_t x = 0; x < g.dim(); ++x)
      if (const auto& c = e.guard.conjuncts[x]) {
        if (c->lo)
          rg.max_const[x] = std::max(rg.max_const[x], to_long_checked(c->lo->floor()));
        if (c->hi)
          rg.max_const[x] = std::max(rg.max_const[x], to_long_checked(c->hi->floor()));
      }
  if (opts.global_max && g.dim() > 0)
    rg.max_const.assign(g.dim(), *std::max_element(rg.max_const.begin(), rg.max_const.end()));

  auto intern = [&](std::size_t loc, Region r) {
    auto [it, fresh] = rg.index.try_emplace({loc, r}, rg.nodes.size());
    if (fresh) {
      if (rg.nodes.size() >= opts.max_nodes)
        throw RegionGameTooLarge("region graph exceeds " + std::to_string(opts.max_nodes) + " nodes");
      rg.nodes.push_back({loc, std::move(r), {}});
    }
    return it->second;
  };

  // Scaled bounds are integers; compare them as longs in the inner loop.
  struct Bounds {
    std::vector<long> lo, hi; // LONG_MIN / LONG_MAX when absent
  };
  std::vector<Bounds> bounds;
  for (const Edge& e : g.edges()) {
    Bounds b{std::vector<long>(g.dim(), LONG_MIN), std::vector<long>(g.dim(), LONG_MAX)};
    for (std::size_t x = 0; x < g.dim(); ++x)
      if (const auto& c = e.guard.conjuncts[x]) {
        if (c->lo)
          b.lo[x] = to_long_checked(c->lo->floor());
        if (c->hi)
          b.hi[x] = to_long_checked(c->hi->floor());
      }
    bounds.push_back(std::move(b));
  }
  auto holds = [&](const Region& r, std::size_t e) {
    const Bounds& b = bounds[e];
    for (std::size_t x = 0; x < r.ipart.size(); ++x) {
      if (is_above(r, x, rg.max_const)) {
        if (b.hi[x] != LONG_MAX)
          return false;
        continue;
      }
      if (b.lo[x] > r.ipart[x])
        return false;
      if (b.hi[x] < r.ipart[x] + (r.frac[x] == 0 ? 0 : 1))
        return false;
    }
    return true;
  };
  std::vector<std::vector<std::size_t>> resets;
  for (const Edge& e : g.edges())
    resets.push_back(e.reset_set());

  rg.init = intern(g.init(), Region{std::vector<long>(g.dim(), 0), std::vector<int>(g.dim(), 0)});
  for (std::size_t i = 0; i < rg.nodes.size(); ++i) {
    const std::size_t loc = rg.nodes[i].loc;
    const auto succs = time_successors(rg.nodes[i].region, rg.max_const);
    const auto& out = g.out_edges(loc);
    std::vector<RegionMove> moves;
    for (std::size_t k = 0; k < succs.size(); ++k)
      for (std::size_t e : out) {
        if (!holds(succs[k], e))
          continue;
        const std::size_t s = intern(g.edge(e).dst, reset_region(succs[k], resets[e]));
        moves.push_back({k, succs[k], e, s});
      }
    rg.nodes[i].moves = std::move(moves);
  }
  return rg;
}

std::set<std::string> target_observations(const std::string& obs_list) {
  std::set<std::string> out;
  std::istringstream is(obs_list);
  for (std::string tok; std::getline(is, tok, ',');)
    if (!tok.empty())
      out.insert(tok);
  return out;
}

namespace {

// Layered attractor for `who`: nodes in `base` get rank 0.
std::vector<long> attractor(const RegionGame& rg, const std::vector<bool>& base, Player who) {
  const std::size_t n = rg.nodes.size();
  std::vector<long> rank(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (base[i])
      rank[i] = 0;
  for (long round = 1;; ++round) {
    std::vector<std::size_t> added;
    for (std::size_t i = 0; i < n; ++i) {
      if (rank[i] >= 0)
        continue;
      const auto& moves = rg.nodes[i].moves;
      const bool mine = rg.scaled.location(rg.nodes[i].loc).owner == who;
      auto in = [&](const RegionMove& m) { return rank[m.succ] >= 0; };
      const bool attracted =
          mine ? std::any_of(moves.begin(), moves.end(), in) : !moves.empty() && std::all_of(moves.begin(), moves.end(), in);
      if (attracted)
        added.push_back(i);
    }
    if (added.empty())
      return rank;
    for (std::size_t i : added)
      rank[i] = round;
  }
}

} // namespace

Solution solve_reachability(const RegionGame& rg, const std::set<std::string>& target) {
  const std::size_t n = rg.nodes.size();
  std::vector<bool> base(n);
  for (std::size_t i = 0; i < n; ++i)
    base[i] = target.contains(rg.scaled.location(rg.nodes[i].loc).obs);
  Solution sol;
  sol.rank = attractor(rg, base, Player::One);
  sol.winning.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.winning[i] = sol.rank[i] >= 0;
    if (sol.rank[i] <= 0 || rg.scaled.location(rg.nodes[i].loc).owner != Player::One)
      continue;
    const auto& moves = rg.nodes[i].moves;
    for (std::size_t k = 0; k < moves.size(); ++k) {
      const long r = sol.rank[moves[k].succ];
      if (r >= 0 && r < sol.rank[i]) {
        sol.strategy.choice[i] = k;
        break;
      }
    }
  }
  return sol;
}

Solution solve_safety(const RegionGame& rg, const std::set<std::string>& safe) {
  const std::size_t n = rg.nodes.size();
  std::vector<bool> base(n);
  for (std::size_t i = 0; i < n; ++i)
    base[i] = !safe.contains(rg.scaled.location(rg.nodes[i].loc).obs);
  Solution sol;
  sol.rank = attractor(rg, base, Player::Two);
  sol.winning.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.winning[i] = sol.rank[i] < 0;
    if (!sol.winning[i] || rg.scaled.location(rg.nodes[i].loc).owner != Player::One)
      continue;
    const auto& moves = rg.nodes[i].moves;
    for (std::size_t k = 0; k < moves.size(); ++k)
      if (sol.rank[moves[k].succ] < 0) {
        sol.strategy.choice[i] = k;
        break;
      }
  }
  return sol;
}

std::optional<Rational> concretize_delay(const std::vector<long>& max_const, const mpz_class& factor,
                                        const std::vector<Rational>& val, const Region& target) {
  const Rational d{mpq_class(factor)};
  std::vector<Rational> v;
  for (const Rational& x : val)
    v.push_back(x * d);
  std::vector<Rational> cand{Rational(0)};
  for (std::size_t x = 0; x < v.size(); ++x)
    for (long k = 0; k <= max_const[x] + 1; ++k)
      if (Rational t = Rational(k) - v[x]; t.sign() >= 0)
        cand.push_back(t);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const std::size_t base = cand.size();
  for (std::size_t i = 0; i + 1 < base; ++i)
    cand.push_back((cand[i] + cand[i + 1]) / Rational(2));
  std::sort(cand.begin(), cand.end());

  std::vector<Rational> w(v.size());
  for (const Rational& t : cand) {
    for (std::size_t x = 0; x < v.size(); ++x)
      w[x] = v[x] + t;
    if (region_of(w, max_const) == target)
      return t / d;
  }
  return std::nullopt;
}

Move concretize_move(const RegionGame& rg, const Configuration& q, const RegionMove& m) {
  if (auto t = concretize_delay(rg.max_const, rg.factor, q.val, m.region))
    return Move{m.edge, *t};
  throw NoRealization("no delay reaches region " + region_str(m.region, rg.scaled.vars(), rg.max_const));
}

Strategy region_strategy(std::shared_ptr<const RegionGame> rg, const Solution& sol) {
  return [rg, choice = sol.strategy.choice](const History& h) -> std::optional<Move> {
    const Configuration& q = h.last();
    auto node = rg->node_of(q);
    if (!node || rg->nodes[*node].moves.empty())
      return std::nullopt;
    auto it = choice.find(*node);
    const std::size_t k = it == choice.end() ? 0 : it->second;
    return concretize_move(*rg, q, rg->nodes[*node].moves[k]);
  };
}

} // namespace hgame
