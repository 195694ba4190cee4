#pragma once

#include <memory>
#include <stdexcept>

#include "hgame/semantics.hpp"
#include "hgame/to_updatable.hpp"

namespace hgame {

enum class Stage { Singular, Stopwatch, Annotated, Updatable, Timed };

std::string_view to_string(Stage s);

/// The four games of the reduction plus the intermediate annotated game.
struct Chain {
  std::shared_ptr<const Game> isr;
  std::shared_ptr<const Game> stopwatch;
  std::shared_ptr<const Game> annotated;
  std::shared_ptr<const Game> updatable;
  std::shared_ptr<const Game> timed;
  AnnotateOptions options;

  static Chain build(const Game& isr, const AnnotateOptions& opts = {});

  /// Replaces one stage and rebuilds every later stage from it.
  Chain with_stage(Stage s, Game g) const;

  const Game& game(Stage s) const;
};

struct InvalidHistory : std::logic_error {
  using std::logic_error::logic_error;
};

/// Image of a singular-game history in every stage. All stages carry the
/// same delays; edges are linked through provenance.
struct LiftedHistory {
  Run isr, stopwatch, annotated, updatable, timed;
  const Run& at(Stage s) const;
};

/// Deterministic lifting of a singular-game history along the chain. Throws
/// InvalidHistory when a step of `h` is not a transition of the singular game
/// or has no counterpart in a later stage.
LiftedHistory lift_history(const Chain& chain, const History& h);

/// Longest prefix of `h` that lifts; never throws on unmatched steps.
LiftedHistory lift_prefix(const Chain& chain, const History& h);

/// Maps a timed-game history back to the singular game through γ₂⁻¹, β⁻¹ and
/// γ₁⁻¹, with edges followed back through provenance.
History project_history(const Chain& chain, const History& h_timed);

/// Edge of `to` reached from an edge of `from` by following provenance
/// (towards earlier stages) from the later of the two.
std::optional<std::size_t> provenance_root(const Chain& chain, Stage from, std::size_t edge, Stage to);

} // namespace hgame
