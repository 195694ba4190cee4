#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgame/chain.hpp"
#include "hgame/sampling.hpp"
#include "hgame/semantics.hpp"

namespace hgame {

/// Executable witness of an alternating bisimulation between two games.
/// `backward` is the functional inverse of the relation (every witness built
/// here is functional from right to left). Move maps take both related
/// configurations and keep the delay, following edges along provenance.
struct BisimWitness {
  std::string name;
  std::shared_ptr<const Game> left;
  std::shared_ptr<const Game> right;
  std::function<bool(const Configuration&, const Configuration&)> related;
  std::function<Configuration(const Configuration&)> backward;
  std::function<std::optional<Move>(const Configuration&, const Configuration&, const Move&)> move_forward;
  std::function<std::optional<Move>(const Configuration&, const Configuration&, const Move&)> move_backward;
};

BisimWitness identity_witness(std::shared_ptr<const Game> g);
BisimWitness gamma1_witness(std::shared_ptr<const Game> isr, std::shared_ptr<const Game> stopwatch);
BisimWitness beta1_witness(std::shared_ptr<const Game> stopwatch, std::shared_ptr<const Game> annotated);
BisimWitness beta2_witness(std::shared_ptr<const Game> annotated, std::shared_ptr<const Game> updatable);
/// β stated directly through beta_contains rather than as β₁ ∘ β₂.
BisimWitness beta_witness(std::shared_ptr<const Game> stopwatch, std::shared_ptr<const Game> annotated,
                          std::shared_ptr<const Game> updatable);
BisimWitness gamma2_witness(std::shared_ptr<const Game> updatable, std::shared_ptr<const Game> timed);

/// Relational composition of configuration relations, functional composition
/// of move maps.
BisimWitness compose(const BisimWitness& ab, const BisimWitness& bc);

enum class FailKind {
  NotRelated,
  LabelMismatch,
  NoMatchingMove,
  MatchNotEnabled,
  SuccessorNotRelated,
  OwnerMismatch, ///< pair or successor pair owned by different players
};
std::string_view to_string(FailKind k);

enum class Side { Left, Right };

/// A violated clause together with everything needed to re-execute it.
struct Counterexample {
  FailKind kind;
  Side side = Side::Left; ///< game whose move was not matched
  Configuration left;
  Configuration right;
  std::optional<Move> move;
  std::string detail;
};

struct Verdict {
  bool pass = true;
  std::size_t moves_checked = 0;
  std::optional<Counterexample> failure;
};

struct OwnershipMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

enum class CheckMode {
  Simulation,   ///< player-1 moves of the left game, player-2 moves of the right game
  Bisimulation, ///< every move of either game, whoever owns the configuration
};

/// Checks the bisimulation clauses at one related pair over sampled delays of
/// every enabled edge. Throws OwnershipMismatch when the pair is owned by
/// different players.
Verdict check_local_bisim(const BisimWitness& w, const Configuration& q1, const Configuration& q2,
                          const DelaySampler& sampler, std::uint64_t seed, CheckMode mode = CheckMode::Bisimulation);

/// Re-executes a counterexample independently of the checker and confirms
/// that it violates the clause it names.
bool replay(const BisimWitness& w, const Counterexample& c);

struct RelatedPair {
  Configuration left;
  Configuration right;
};

struct StageReport {
  std::string stage;
  std::size_t pairs_checked = 0;
  std::size_t pairs_passed = 0;
  std::size_t moves_checked = 0;
  std::vector<Counterexample> failures; ///< ordered by pair index
  bool passed() const { return failures.empty(); }
};

/// Serial reference: checks every pair in order. Pair i uses the seed
/// mix_seed(seed, i), so both kernels draw identical delays.
StageReport check_pairs_serial(const BisimWitness& w, std::span<const RelatedPair> pairs,
                               const DelaySampler& sampler, std::uint64_t seed);
/// OpenMP kernel; results are merged by pair index and equal the serial ones.
StageReport check_pairs_parallel(const BisimWitness& w, std::span<const RelatedPair> pairs,
                                 const DelaySampler& sampler, std::uint64_t seed);

enum class Exec { Serial, Parallel };

struct ChainReport {
  std::size_t samples = 0;
  std::vector<StageReport> stages; ///< gamma1, beta1, beta2, beta, gamma2, end_to_end
  std::vector<std::string> warnings;
  bool passed() const;
  const StageReport* stage(std::string_view name) const;
  /// First adjacent stage (in chain order) that failed, if any.
  std::optional<std::string> first_failure() const;
};

struct ChainCheckOptions {
  std::size_t samples = 50; ///< reachable configurations to check
  std::size_t depth = 8;    ///< length of the random plays they are drawn from
  std::uint64_t seed = 1;
  DelaySampler sampler{};
  Exec exec = Exec::Parallel;
};

/// Witnesses checked by verify_chain, in report order: gamma1, beta1, beta2,
/// beta (= beta1 ∘ beta2), gamma2, end_to_end.
std::vector<BisimWitness> chain_witnesses(const Chain& chain);

/// Samples reachable configurations of the singular game by random play,
/// lifts them along the chain and checks every adjacent witness and the
/// composed end-to-end witness.
ChainReport verify_chain(const Chain& chain, const ChainCheckOptions& opts);
ChainReport verify_chain(const Game& isr, const ChainCheckOptions& opts);

/// Lifted tuples of reachable configurations drawn by random play.
std::vector<LiftedHistory> sample_histories(const Chain& chain, const ChainCheckOptions& opts);

} // namespace hgame
