#include "hgame/to_timed.hpp"

#include <deque>
#include <map>
#include <stdexcept>

#include "hgame/validate.hpp"

namespace hgame {

namespace {
using Offsets = std::vector<std::optional<Rational>>;
}

Game to_timed(const Game& updatable) {
  if (auto v = validate_game(updatable); !v.empty())
    throw InvalidGame(std::move(v));
  if (!flavor_refines(updatable.flavor(), Flavor::Updatable))
    throw std::invalid_argument("to_timed expects an updatable timed game");

  GameData d;
  d.flavor = Flavor::Timed;
  d.vars = updatable.data().vars;
  d.actions = updatable.data().actions;
  d.observations = updatable.data().observations;

  std::map<std::pair<std::size_t, Offsets>, std::size_t> index;
  std::deque<std::pair<std::size_t, Offsets>> queue;
  auto intern = [&](std::size_t base, const Offsets& g) {
    auto [it, fresh] = index.try_emplace({base, g}, d.locations.size());
    if (fresh) {
      const Location& b = updatable.location(base);
      d.locations.push_back({b.id.with(Annotation{Annotation::Kind::G, g}), b.owner, b.obs, b.flow});
      queue.emplace_back(base, g);
    }
    return it->second;
  };

  d.init = intern(updatable.init(), Offsets(updatable.dim(), Rational(0)));

  std::map<std::string, std::size_t> copies;
  while (!queue.empty()) {
    auto [base, g] = queue.front();
    queue.pop_front();
    const std::size_t src = index.at({base, g});
    for (std::size_t ei : updatable.out_edges(base)) {
      const Edge& e = updatable.edge(ei);
      Edge te = e;
      Offsets next = g;
      for (std::size_t x = 0; x < d.vars.size(); ++x) {
        if (auto& c = te.guard.conjuncts[x])
          c = c->shifted_down(*g[x]);
        if (e.reset.values[x]) {
          next[x] = e.reset.values[x];
          te.reset.values[x] = Rational(0);
        }
      }
      te.id = e.id + "#" + std::to_string(copies[e.id]++);
      te.src = src;
      te.dst = intern(e.dst, next);
      te.provenance = e.id;
      d.edges.push_back(std::move(te));
    }
  }
  return Game(std::move(d));
}

const Offsets& clock_offsets(const Game& timed, std::size_t loc) {
  const LocationId& id = timed.location(loc).id;
  if (!id.annotated() || id.outer().kind != Annotation::Kind::G)
    throw std::invalid_argument("location " + id.str(timed.vars()) + " carries no clock offsets");
  return id.outer().values;
}

Configuration gamma2(const Game& timed, std::size_t timed_loc, const Configuration& q_u) {
  const Offsets& g = clock_offsets(timed, timed_loc);
  Configuration r{timed_loc, q_u.val};
  for (std::size_t x = 0; x < r.val.size(); ++x)
    r.val[x] -= *g[x];
  return r;
}

Configuration gamma2_inv(const Game& timed, const Game& updatable, const Configuration& q_t) {
  const Offsets& g = clock_offsets(timed, q_t.loc);
  auto base = updatable.find_location(timed.location(q_t.loc).id.stripped());
  if (!base)
    throw std::invalid_argument("timed location has no base in the updatable game");
  Configuration r{*base, q_t.val};
  for (std::size_t x = 0; x < r.val.size(); ++x)
    r.val[x] += *g[x];
  return r;
}

} // namespace hgame
