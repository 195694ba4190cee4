#include "hgame/game.hpp"

#include <stdexcept>

namespace hgame {

std::string_view to_string(Flavor f) {
  switch (f) {
  case Flavor::ISR: return "isr";
  case Flavor::Stopwatch: return "stopwatch";
  case Flavor::AnnotatedStopwatch: return "annotated-stopwatch";
  case Flavor::Updatable: return "updatable";
  case Flavor::Timed: return "timed";
  }
  return "?";
}

std::optional<Flavor> parse_flavor(std::string_view s) {
  for (Flavor f : {Flavor::ISR, Flavor::Stopwatch, Flavor::AnnotatedStopwatch, Flavor::Updatable, Flavor::Timed})
    if (to_string(f) == s)
      return f;
  return std::nullopt;
}

Interval Interval::divided_by(const Rational& d) const {
  if (d.sign() == 0)
    throw std::domain_error("interval divided by zero");
  auto div = [&](const std::optional<Rational>& b) -> std::optional<Rational> {
    if (!b)
      return std::nullopt;
    return *b / d;
  };
  if (d.sign() > 0)
    return {div(lo), div(hi)};
  return {div(hi), div(lo)};
}

Interval Interval::shifted_down(const Rational& d) const {
  Interval r = *this;
  if (r.lo)
    *r.lo -= d;
  if (r.hi)
    *r.hi -= d;
  return r;
}

Interval Interval::scaled(const Rational& k) const {
  Interval r = *this;
  if (r.lo)
    r.lo = *r.lo * k;
  if (r.hi)
    r.hi = *r.hi * k;
  return r;
}

Interval Interval::intersect(const Interval& o) const {
  Interval r = *this;
  if (o.lo && (!r.lo || *o.lo > *r.lo))
    r.lo = o.lo;
  if (o.hi && (!r.hi || *o.hi < *r.hi))
    r.hi = o.hi;
  return r;
}

std::string Interval::str() const {
  return "[" + (lo ? lo->str() : std::string("-inf")) + "," + (hi ? hi->str() : std::string("inf")) + "]";
}

LocationId LocationId::stripped() const {
  LocationId r = *this;
  if (!r.annotations.empty())
    r.annotations.pop_back();
  return r;
}

LocationId LocationId::with(Annotation a) const {
  LocationId r = *this;
  r.annotations.push_back(std::move(a));
  return r;
}

std::string LocationId::str(std::span<const std::string> vars) const {
  std::string s = base;
  for (const Annotation& a : annotations) {
    s += a.kind == Annotation::Kind::F ? "{f:" : "{g:";
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (i)
        s += ',';
      s += i < vars.size() ? vars[i] : "#" + std::to_string(i);
      s += '=';
      s += a.values[i] ? a.values[i]->str() : "_";
    }
    s += '}';
  }
  return s;
}

std::vector<std::size_t> Edge::reset_set() const {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < reset.values.size(); ++i)
    if (reset.values[i])
      r.push_back(i);
  return r;
}

Game::Game(GameData data) : data_(std::move(data)) {
  out_.resize(data_.locations.size());
  for (std::size_t e = 0; e < data_.edges.size(); ++e)
    if (data_.edges[e].src < out_.size())
      out_[data_.edges[e].src].push_back(e);
  for (std::size_t l = 0; l < data_.locations.size(); ++l)
    loc_index_.emplace(data_.locations[l].id, l);
  for (std::size_t e = 0; e < data_.edges.size(); ++e)
    edge_index_.emplace(data_.edges[e].id, e);
}

std::span<const std::size_t> Game::out_edges(std::size_t loc) const { return out_.at(loc); }

std::optional<std::size_t> Game::find_location(const LocationId& id) const {
  auto it = loc_index_.find(id);
  if (it == loc_index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Game::find_edge(std::string_view id) const {
  auto it = edge_index_.find(std::string(id));
  if (it == edge_index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Game::find_var(std::string_view name) const {
  for (std::size_t i = 0; i < data_.vars.size(); ++i)
    if (data_.vars[i] == name)
      return i;
  return std::nullopt;
}

std::optional<std::size_t> Game::edge_with_provenance(std::size_t loc, std::string_view prov) const {
  for (std::size_t e : out_edges(loc))
    if (data_.edges[e].provenance && *data_.edges[e].provenance == prov)
      return e;
  return std::nullopt;
}

} // namespace hgame
