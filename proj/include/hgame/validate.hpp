#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hgame/game.hpp"

namespace hgame {

enum class ViolationKind {
  InitializationBroken, ///< slope changes across an edge without a reset
  GuardNotTotal,        ///< ISR guard lacks a conjunct for some variable
  NonCompactGuard,      ///< guard interval with an infinite bound
  EmptyGuardInterval,   ///< lo > hi
  InitNotPlayerOne,
  InitOutOfRange,
  DanglingEndpoint,
  DuplicateLocation,
  DuplicateEdge,
  ArityMismatch,        ///< flow/guard/reset/annotation sized differently from vars
  UnknownObservation,
  UnknownAction,
  FlowNotInFlavor,      ///< e.g. slope 2 in a stopwatch game
  ResetNotInFlavor,     ///< non-zero reset in a timed game
  AnnotationMismatch,   ///< f-annotation inconsistent with the location's slopes
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string where; ///< edge or location id
  std::string var;   ///< variable name when relevant
  std::string message;
};

/// Checks every structural invariant of the game's declared flavor. An empty
/// result means the game is well formed.
std::vector<Violation> validate_game(const Game& g);

struct InvalidGame : std::runtime_error {
  explicit InvalidGame(std::vector<Violation> v);
  std::vector<Violation> violations;
};

/// Most specific structural flavor among ISR, Stopwatch, Updatable and Timed.
/// Throws InvalidGame when validation fails.
Flavor classify_flavor(const Game& g);

/// True when every invariant of `f` holds for `actual` (flavor inclusion).
bool flavor_refines(Flavor actual, Flavor f);

struct ScaledGame {
  Game game;
  mpz_class factor; ///< D: every guard bound multiplied by D is an integer
};

/// Multiplies every guard bound of a timed game by the lcm of their
/// denominators. Time and valuations scale by the same factor.
ScaledGame scale_to_integers(const Game& g);

} // namespace hgame
