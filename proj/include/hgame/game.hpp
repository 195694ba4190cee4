#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hgame/rational.hpp"

namespace hgame {

enum class Player { One = 1, Two = 2 };

/// Game flavors along the reduction chain. Structurally
/// Timed ⊂ Updatable ⊂ Stopwatch ⊂ ISR; AnnotatedStopwatch is a Stopwatch
/// game whose locations carry frozen-value annotations.
enum class Flavor { ISR, Stopwatch, AnnotatedStopwatch, Updatable, Timed };

std::string_view to_string(Flavor f);
std::optional<Flavor> parse_flavor(std::string_view s);

/// Closed interval over the rationals. A missing bound means unbounded on
/// that side; game guards are required to have both bounds (see validate).
struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;

  static Interval closed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi)}; }
  static Interval point(const Rational& p) { return {p, p}; }
  static Interval ray_from(Rational lo) { return {std::move(lo), std::nullopt}; }

  bool compact() const { return lo && hi; }
  bool empty() const { return lo && hi && *lo > *hi; }
  bool contains(const Rational& r) const { return (!lo || *lo <= r) && (!hi || r <= *hi); }

  /// {r / d | r ∈ I}; endpoints swap when d < 0.
  Interval divided_by(const Rational& d) const;
  /// {r - d | r ∈ I}
  Interval shifted_down(const Rational& d) const;
  Interval scaled(const Rational& k) const; ///< k > 0
  Interval intersect(const Interval& o) const;

  std::string str() const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Conjunction of per-variable interval constraints, indexed by variable.
/// An absent conjunct leaves the variable unconstrained.
struct Guard {
  std::vector<std::optional<Interval>> conjuncts;
  friend bool operator==(const Guard&, const Guard&) = default;
};

/// Per-variable reset values; absent means the variable keeps its value.
struct Reset {
  std::vector<std::optional<Rational>> values;
  friend bool operator==(const Reset&, const Reset&) = default;
};

/// Extra information attached to a location by the annotation passes:
/// kind F records frozen values (absent for running variables), kind G
/// records clock offsets (always present).
struct Annotation {
  enum class Kind { F, G };
  Kind kind = Kind::F;
  std::vector<std::optional<Rational>> values;

  friend bool operator==(const Annotation&, const Annotation&) = default;
  friend auto operator<=>(const Annotation& a, const Annotation& b) {
    if (auto c = a.kind <=> b.kind; c != 0)
      return c;
    return a.values <=> b.values;
  }
};

/// Base name plus a stack of annotations, innermost first. A location of the
/// timed game built from an annotated stopwatch game looks like ((l, f), g).
struct LocationId {
  std::string base;
  std::vector<Annotation> annotations;

  LocationId() = default;
  LocationId(std::string name) : base(std::move(name)) {} // NOLINT(google-explicit-constructor)
  LocationId(const char* name) : base(name) {}            // NOLINT(google-explicit-constructor)

  bool annotated() const { return !annotations.empty(); }
  const Annotation& outer() const { return annotations.back(); }
  LocationId stripped() const;                 ///< drops the outermost annotation
  LocationId with(Annotation a) const;         ///< pushes a new outermost annotation
  /// Canonical text key, e.g. "l{f:x=0,y=_}{g:x=3/2,y=0}".
  std::string str(std::span<const std::string> vars) const;

  friend bool operator==(const LocationId&, const LocationId&) = default;
  friend auto operator<=>(const LocationId&, const LocationId&) = default;
};

struct Location {
  LocationId id;
  Player owner = Player::One;
  std::string obs;
  std::vector<Rational> flow; ///< one slope per variable
};

struct Edge {
  std::string id;
  std::size_t src = 0;
  std::string action;
  Guard guard;
  Reset reset;
  std::size_t dst = 0;
  /// Id of the edge this one was derived from in the previous game of the chain.
  std::optional<std::string> provenance;

  /// Clocks reset by the edge (the domain of the reset map).
  std::vector<std::size_t> reset_set() const;
};

/// Plain aggregate holding every component of a game. Build one, then wrap
/// it in a Game, which is immutable and indexed.
struct GameData {
  Flavor flavor = Flavor::ISR;
  std::vector<std::string> vars;
  std::vector<std::string> actions;
  std::vector<std::string> observations;
  std::vector<Location> locations;
  std::vector<Edge> edges;
  std::size_t init = 0;
};

class Game {
public:
  explicit Game(GameData data);

  const GameData& data() const { return data_; }
  Flavor flavor() const { return data_.flavor; }
  std::size_t dim() const { return data_.vars.size(); }
  std::span<const std::string> vars() const { return data_.vars; }
  std::span<const Location> locations() const { return data_.locations; }
  std::span<const Edge> edges() const { return data_.edges; }
  const Location& location(std::size_t i) const { return data_.locations.at(i); }
  const Edge& edge(std::size_t i) const { return data_.edges.at(i); }
  std::size_t init() const { return data_.init; }

  /// Edges leaving a location, in edge-index order.
  std::span<const std::size_t> out_edges(std::size_t loc) const;
  std::optional<std::size_t> find_location(const LocationId& id) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;
  std::optional<std::size_t> find_var(std::string_view name) const;
  /// The unique edge leaving `loc` whose provenance is `prov`, if any.
  std::optional<std::size_t> edge_with_provenance(std::size_t loc, std::string_view prov) const;

  std::string location_key(std::size_t loc) const { return location(loc).id.str(data_.vars); }

private:
  GameData data_;
  std::vector<std::vector<std::size_t>> out_;
  std::map<LocationId, std::size_t> loc_index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
};

} // namespace hgame
