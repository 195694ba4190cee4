#include "hgame/to_updatable.hpp"

#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "hgame/validate.hpp"

namespace hgame {

namespace {

using Frozen = std::vector<std::optional<Rational>>;

void require_stopwatch(const Game& g) {
  if (auto v = validate_game(g); !v.empty())
    throw InvalidGame(std::move(v));
  for (const Location& l : g.locations())
    for (const Rational& f : l.flow)
      if (f != 0 && f != 1)
        throw std::invalid_argument("annotate_resets expects slopes in {0, 1}, got " + f.str() + " at " +
                                    l.id.str(g.vars()));
}

/// Constants of a stopwatch game: guard bounds, reset values, and 0.
std::vector<Rational> constants(const Game& g) {
  std::set<Rational> k{Rational(0)};
  for (const Edge& e : g.edges()) {
    for (const auto& c : e.guard.conjuncts)
      if (c) {
        if (c->lo)
          k.insert(*c->lo);
        if (c->hi)
          k.insert(*c->hi);
      }
    for (const auto& r : e.reset.values)
      if (r)
        k.insert(*r);
  }
  return {k.begin(), k.end()};
}

Annotation frozen_annotation(Frozen f) { return Annotation{Annotation::Kind::F, std::move(f)}; }

Game updatable_from(const Game& annotated, bool rewrite_frozen_guards) {
  if (annotated.flavor() != Flavor::AnnotatedStopwatch)
    throw std::invalid_argument("to_updatable expects an annotated stopwatch game");
  GameData d = annotated.data();
  d.flavor = Flavor::Updatable;
  for (Location& l : d.locations)
    for (Rational& f : l.flow)
      f = Rational(1);
  std::vector<Edge> edges;
  edges.reserve(d.edges.size());
  for (const Edge& src_edge : annotated.edges()) {
    Edge e = src_edge;
    const Frozen& f1 = annotated.location(e.src).id.outer().values;
    const Frozen& f2 = annotated.location(e.dst).id.outer().values;
    bool keep = true;
    for (std::size_t x = 0; x < d.vars.size(); ++x) {
      if (f2[x])
        e.reset.values[x] = f2[x];
      auto& c = e.guard.conjuncts[x];
      if (rewrite_frozen_guards && f1[x] && c) {
        if (c->contains(*f1[x]))
          c.reset();
        else
          keep = false;
      }
    }
    if (!keep)
      continue;
    e.provenance = src_edge.id;
    edges.push_back(std::move(e));
  }
  d.edges = std::move(edges);
  return Game(std::move(d));
}

} // namespace

Frozen initial_frozen(const Game& stopwatch) {
  const Location& l0 = stopwatch.location(stopwatch.init());
  Frozen f(stopwatch.dim());
  for (std::size_t x = 0; x < f.size(); ++x)
    if (l0.flow[x] == 0)
      f[x] = Rational(0);
  return f;
}

Frozen next_frozen(const Game& stopwatch, const Edge& e, const Frozen& f) {
  const Location& dst = stopwatch.location(e.dst);
  Frozen out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (dst.flow[x] == 1)
      continue;
    out[x] = e.reset.values[x] ? e.reset.values[x] : f[x];
  }
  return out;
}

Game annotate_resets(const Game& stopwatch, const AnnotateOptions& opts) {
  require_stopwatch(stopwatch);
  GameData d;
  d.flavor = Flavor::AnnotatedStopwatch;
  d.vars = stopwatch.data().vars;
  d.actions = stopwatch.data().actions;
  d.observations = stopwatch.data().observations;

  std::map<std::pair<std::size_t, Frozen>, std::size_t> index;
  std::deque<std::pair<std::size_t, Frozen>> queue;
  auto intern = [&](std::size_t base, const Frozen& f) {
    auto [it, fresh] = index.try_emplace({base, f}, d.locations.size());
    if (fresh) {
      const Location& b = stopwatch.location(base);
      d.locations.push_back({b.id.with(frozen_annotation(f)), b.owner, b.obs, b.flow});
      queue.emplace_back(base, f);
    }
    return it->second;
  };

  d.init = intern(stopwatch.init(), initial_frozen(stopwatch));

  if (opts.full_product) {
    const std::vector<Rational> k = constants(stopwatch);
    for (std::size_t l = 0; l < stopwatch.locations().size(); ++l) {
      const Location& b = stopwatch.location(l);
      std::vector<std::size_t> stopped;
      for (std::size_t x = 0; x < b.flow.size(); ++x)
        if (b.flow[x] == 0)
          stopped.push_back(x);
      std::vector<std::size_t> digit(stopped.size(), 0);
      while (true) {
        Frozen f(stopwatch.dim());
        for (std::size_t i = 0; i < stopped.size(); ++i)
          f[stopped[i]] = k[digit[i]];
        intern(l, f);
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == k.size())
          digit[i++] = 0;
        if (i == digit.size())
          break;
      }
    }
  }

  std::map<std::string, std::size_t> copies;
  while (!queue.empty()) {
    auto [base, f] = queue.front();
    queue.pop_front();
    const std::size_t src = index.at({base, f});
    for (std::size_t ei : stopwatch.out_edges(base)) {
      const Edge& e = stopwatch.edge(ei);
      const std::size_t dst = intern(e.dst, next_frozen(stopwatch, e, f));
      Edge ae = e;
      ae.id = e.id + "#" + std::to_string(copies[e.id]++);
      ae.src = src;
      ae.dst = dst;
      ae.provenance = e.id;
      d.edges.push_back(std::move(ae));
    }
  }
  return Game(std::move(d));
}

Game to_updatable(const Game& annotated) { return updatable_from(annotated, true); }

Game to_updatable_keep_guards(const Game& annotated) { return updatable_from(annotated, false); }

bool beta_contains(const Game& stopwatch, const Configuration& q_w, const Game& updatable, const Configuration& q_u) {
  const LocationId& u = updatable.location(q_u.loc).id;
  return u.annotated() && u.stripped() == stopwatch.location(q_w.loc).id && q_u.val == q_w.val;
}

} // namespace hgame
