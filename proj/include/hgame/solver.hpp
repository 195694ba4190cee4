#pragma once

#include <map>
#include <optional>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgame/semantics.hpp"
#include "hgame/validate.hpp"

namespace hgame {

/// Clock region for per-clock maximal constants M_x. A clock is either above
/// its constant (`ipart == M_x + 1`, no fractional rank) or has an integer
/// part and a fractional rank: 0 for a zero fraction, otherwise the 1-based
/// position of its fractional class in increasing order.
struct Region {
  std::vector<long> ipart;
  std::vector<int> frac; ///< -1 for clocks above their constant

  friend bool operator==(const Region&, const Region&) = default;
  friend auto operator<=>(const Region&, const Region&) = default;
};

/// Region of a valuation in a game scaled to integer constants.
Region region_of(const std::vector<Rational>& val, const std::vector<long>& max_const);

bool is_above(const Region& r, std::size_t x, const std::vector<long>& max_const);

/// Immediate time successor; equals `r` when every clock is above.
Region time_successor(const Region& r, const std::vector<long>& max_const);

/// r, its successor, and so on up to the all-above region.
std::vector<Region> time_successors(const Region& r, const std::vector<long>& max_const);

bool satisfies(const Region& r, const Guard& g, const std::vector<long>& max_const);

/// Sets the given clocks to 0 and renumbers fractional classes.
Region reset_region(const Region& r, const std::vector<std::size_t>& clocks);

/// Human-readable form, e.g. "x=1,y∈(0,1);y" (names with a fractional order).
std::string region_str(const Region& r, std::span<const std::string> vars, const std::vector<long>& max_const);

struct RegionMove {
  std::size_t delay_index; ///< position of the target region in the node's time-successor list
  Region region;           ///< region reached after the delay
  std::size_t edge;
  std::size_t succ;        ///< successor node
};

struct RegionNode {
  std::size_t loc;
  Region region;
  std::vector<RegionMove> moves;
};

struct RegionGameTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Region graph of a timed game, restricted to nodes reachable from the
/// initial node. Built on the integer-scaled copy of the game; delays and
/// valuations of the original game scale by `factor`.
struct RegionGame {
  Game scaled;
  mpz_class factor = 1;
  std::vector<long> max_const;
  std::vector<RegionNode> nodes;
  std::size_t init = 0;
  std::map<std::pair<std::size_t, Region>, std::size_t> index;

  std::optional<std::size_t> node_of(const Configuration& q_unscaled) const;
};

struct RegionOptions {
  std::size_t max_nodes = 1'000'000; ///< RegionGameTooLarge beyond this
  bool global_max = false;           ///< one constant for every clock instead of M_x
};

RegionGame build_region_graph(const Game& timed, const RegionOptions& opts = {});

struct RegionStrategy {
  std::map<std::size_t, std::size_t> choice; ///< Pl1 node -> index into its move list
};

struct Solution {
  std::vector<bool> winning;   ///< per node, for player 1
  std::vector<long> rank;      ///< attractor layer of each node, -1 when not attracted
  RegionStrategy strategy;
  bool init_winning(const RegionGame& rg) const { return winning[rg.init]; }
};

std::set<std::string> target_observations(const std::string& obs_list);

/// Least fixpoint attractor for player 1 towards locations labelled with one
/// of `target`. Player-1 choices pick the lowest-index move into a lower layer.
Solution solve_reachability(const RegionGame& rg, const std::set<std::string>& target);

/// Player 1 keeps the play among `safe` observations forever (halting is
/// safe); winning nodes are the complement of player 2's attractor to the
/// unsafe nodes.
Solution solve_safety(const RegionGame& rg, const std::set<std::string>& safe);

struct NoRealization : std::logic_error {
  using std::logic_error::logic_error;
};

/// Smallest candidate delay (in unscaled time) taking `val` into `target`:
/// integer crossings k - v(x) of the scaled valuation and their midpoints.
std::optional<Rational> concretize_delay(const std::vector<long>& max_const, const mpz_class& factor,
                                        const std::vector<Rational>& val, const Region& target);

/// A rational delay of the original game that moves `q` into the region of
/// `m`, paired with the edge of `m`.
Move concretize_move(const RegionGame& rg, const Configuration& q, const RegionMove& m);

/// Positional strategy on the original timed game: the solved move where one
/// exists, otherwise the node's first move, otherwise no move.
Strategy region_strategy(std::shared_ptr<const RegionGame> rg, const Solution& sol);

} // namespace hgame
