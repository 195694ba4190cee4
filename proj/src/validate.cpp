#include "hgame/validate.hpp"

#include <algorithm>
#include <set>

namespace hgame {

std::string_view to_string(ViolationKind k) {
  switch (k) {
  case ViolationKind::InitializationBroken: return "InitializationBroken";
  case ViolationKind::GuardNotTotal: return "GuardNotTotal";
  case ViolationKind::NonCompactGuard: return "NonCompactGuard";
  case ViolationKind::EmptyGuardInterval: return "EmptyGuardInterval";
  case ViolationKind::InitNotPlayerOne: return "InitNotPlayerOne";
  case ViolationKind::InitOutOfRange: return "InitOutOfRange";
  case ViolationKind::DanglingEndpoint: return "DanglingEndpoint";
  case ViolationKind::DuplicateLocation: return "DuplicateLocation";
  case ViolationKind::DuplicateEdge: return "DuplicateEdge";
  case ViolationKind::ArityMismatch: return "ArityMismatch";
  case ViolationKind::UnknownObservation: return "UnknownObservation";
  case ViolationKind::UnknownAction: return "UnknownAction";
  case ViolationKind::FlowNotInFlavor: return "FlowNotInFlavor";
  case ViolationKind::ResetNotInFlavor: return "ResetNotInFlavor";
  case ViolationKind::AnnotationMismatch: return "AnnotationMismatch";
  }
  return "?";
}

namespace {

std::string summarize(const std::vector<Violation>& v) {
  std::string s = "invalid game:";
  for (const auto& x : v)
    s += std::string(" ") + std::string(to_string(x.kind)) + "(" + x.where + (x.var.empty() ? "" : ", " + x.var) + ")";
  return s;
}

bool stopwatch_like(Flavor f) { return f == Flavor::Stopwatch || f == Flavor::AnnotatedStopwatch; }
bool clock_only(Flavor f) { return f == Flavor::Updatable || f == Flavor::Timed; }

int rank(Flavor f) {
  switch (f) {
  case Flavor::ISR: return 0;
  case Flavor::Stopwatch:
  case Flavor::AnnotatedStopwatch: return 1;
  case Flavor::Updatable: return 2;
  case Flavor::Timed: return 3;
  }
  return 0;
}

} // namespace

InvalidGame::InvalidGame(std::vector<Violation> v) : std::runtime_error(summarize(v)), violations(std::move(v)) {}

std::vector<Violation> validate_game(const Game& g) {
  const GameData& d = g.data();
  const std::size_t n = d.vars.size();
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string where, std::string var, std::string msg) {
    out.push_back({k, std::move(where), std::move(var), std::move(msg)});
  };

  const std::set<std::string> obs(d.observations.begin(), d.observations.end());
  const std::set<std::string> acts(d.actions.begin(), d.actions.end());

  if (d.init >= d.locations.size())
    add(ViolationKind::InitOutOfRange, "init", "", "initial location index out of range");
  else if (d.locations[d.init].owner != Player::One)
    add(ViolationKind::InitNotPlayerOne, d.locations[d.init].id.str(d.vars), "", "initial location must belong to player 1");

  std::set<LocationId> seen_locs;
  for (const Location& l : d.locations) {
    const std::string key = l.id.str(d.vars);
    if (!seen_locs.insert(l.id).second)
      add(ViolationKind::DuplicateLocation, key, "", "location id declared twice");
    if (l.flow.size() != n) {
      add(ViolationKind::ArityMismatch, key, "", "flow vector does not cover every variable");
      continue;
    }
    if (!obs.count(l.obs))
      add(ViolationKind::UnknownObservation, key, "", "observation '" + l.obs + "' not declared");
    for (const Annotation& a : l.id.annotations)
      if (a.values.size() != n)
        add(ViolationKind::ArityMismatch, key, "", "annotation does not cover every variable");
    for (std::size_t x = 0; x < n; ++x) {
      const Rational& f = l.flow[x];
      if (stopwatch_like(d.flavor) && f != 0 && f != 1)
        add(ViolationKind::FlowNotInFlavor, key, d.vars[x], "stopwatch slopes must be 0 or 1");
      if (clock_only(d.flavor) && f != 1)
        add(ViolationKind::FlowNotInFlavor, key, d.vars[x], "clock slopes must be 1");
    }
    if (d.flavor == Flavor::AnnotatedStopwatch) {
      if (!l.id.annotated() || l.id.outer().kind != Annotation::Kind::F) {
        add(ViolationKind::AnnotationMismatch, key, "", "annotated stopwatch location without f-annotation");
      } else if (l.id.outer().values.size() == n) {
        for (std::size_t x = 0; x < n; ++x)
          if (l.id.outer().values[x].has_value() != (l.flow[x] == 0))
            add(ViolationKind::AnnotationMismatch, key, d.vars[x], "f(x) must be set exactly for stopped variables");
      }
    }
  }

  std::set<std::string> seen_edges;
  for (const Edge& e : d.edges) {
    if (!seen_edges.insert(e.id).second)
      add(ViolationKind::DuplicateEdge, e.id, "", "edge id declared twice");
    if (e.src >= d.locations.size() || e.dst >= d.locations.size()) {
      add(ViolationKind::DanglingEndpoint, e.id, "", "edge endpoint does not exist");
      continue;
    }
    if (!acts.count(e.action))
      add(ViolationKind::UnknownAction, e.id, "", "action '" + e.action + "' not declared");
    if (e.guard.conjuncts.size() != n || e.reset.values.size() != n) {
      add(ViolationKind::ArityMismatch, e.id, "", "guard or reset does not cover every variable");
      continue;
    }
    const Location& src = d.locations[e.src];
    const Location& dst = d.locations[e.dst];
    for (std::size_t x = 0; x < n; ++x) {
      const auto& c = e.guard.conjuncts[x];
      if (!c) {
        if (d.flavor == Flavor::ISR)
          add(ViolationKind::GuardNotTotal, e.id, d.vars[x], "ISR guard needs one conjunct per variable");
      } else if (!c->compact()) {
        add(ViolationKind::NonCompactGuard, e.id, d.vars[x], "guard interval must be bounded on both sides");
      } else if (c->empty()) {
        add(ViolationKind::EmptyGuardInterval, e.id, d.vars[x], "guard interval has lo > hi");
      }
      if (src.flow.size() == n && dst.flow.size() == n && src.flow[x] != dst.flow[x] && !e.reset.values[x])
        add(ViolationKind::InitializationBroken, e.id, d.vars[x], "slope changes from " + src.flow[x].str() + " to " + dst.flow[x].str() + " without a reset");
      if (d.flavor == Flavor::Timed && e.reset.values[x] && *e.reset.values[x] != 0)
        add(ViolationKind::ResetNotInFlavor, e.id, d.vars[x], "timed games reset clocks to 0 only");
    }
  }
  return out;
}

Flavor classify_flavor(const Game& g) {
  if (auto v = validate_game(g); !v.empty())
    throw InvalidGame(std::move(v));
  bool all_one = true, zero_one = true, zero_resets = true;
  for (const Location& l : g.locations())
    for (const Rational& f : l.flow) {
      all_one = all_one && f == 1;
      zero_one = zero_one && (f == 0 || f == 1);
    }
  for (const Edge& e : g.edges())
    for (const auto& r : e.reset.values)
      zero_resets = zero_resets && (!r || *r == 0);
  if (all_one)
    return zero_resets ? Flavor::Timed : Flavor::Updatable;
  return zero_one ? Flavor::Stopwatch : Flavor::ISR;
}

bool flavor_refines(Flavor actual, Flavor f) { return rank(actual) >= rank(f); }

ScaledGame scale_to_integers(const Game& g) {
  if (g.flavor() != Flavor::Timed)
    throw std::invalid_argument("scale_to_integers expects a timed game");
  mpz_class factor = 1;
  for (const Edge& e : g.edges())
    for (const auto& c : e.guard.conjuncts) {
      if (!c)
        continue;
      if (c->lo)
        factor = lcm(factor, c->lo->den());
      if (c->hi)
        factor = lcm(factor, c->hi->den());
    }
  GameData d = g.data();
  const Rational k{mpq_class(factor)};
  for (Edge& e : d.edges)
    for (auto& c : e.guard.conjuncts)
      if (c)
        c = c->scaled(k);
  return {Game(std::move(d)), factor};
}

} // namespace hgame
