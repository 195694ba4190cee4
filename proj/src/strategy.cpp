#include "hgame/strategy.hpp"

namespace hgame {

Strategy random_strategy(std::shared_ptr<const Game> g, std::uint64_t seed, const DelayPick& pick) {
  return [g = std::move(g), seed, pick](const History& h) -> std::optional<Move> {
    const Configuration& q = h.last();
    std::vector<std::pair<std::size_t, Interval>> options;
    for (std::size_t e : g->out_edges(q.loc))
      if (auto w = delay_window(*g, q, e))
        options.emplace_back(e, *w);
    if (options.empty())
      return std::nullopt;
    std::mt19937_64 rng(mix_seed(mix_seed(seed, h.steps.size()), q.loc));
    std::uniform_int_distribution<std::size_t> which(0, options.size() - 1);
    const auto& [edge, window] = options[which(rng)];
    return Move{edge, pick_delay(window, rng, pick)};
  };
}

Strategy pull_back_strategy(const Chain& chain, Strategy timed_strategy) {
  return [chain, sigma = std::move(timed_strategy)](const History& h) -> std::optional<Move> {
    LiftedHistory lifted = lift_history(chain, h);
    std::optional<Move> m = sigma(lifted.timed);
    if (!m)
      return std::nullopt;
    auto e = provenance_root(chain, Stage::Timed, m->edge, Stage::Singular);
    if (!e)
      throw InvalidHistory("timed move has no singular-game origin");
    return Move{*e, m->delay};
  };
}

Strategy push_forward_strategy(const Chain& chain, Strategy singular_strategy) {
  return [chain, sigma = std::move(singular_strategy)](const History& h_timed) -> std::optional<Move> {
    History h = project_history(chain, h_timed);
    std::optional<Move> m = sigma(h);
    if (!m)
      return std::nullopt;
    for (std::size_t e : chain.timed->out_edges(h_timed.last().loc))
      if (provenance_root(chain, Stage::Timed, e, Stage::Singular) == m->edge)
        return Move{e, m->delay};
    throw InvalidHistory("singular move has no counterpart in the timed game");
  };
}

TraceInclusionReport check_trace_inclusion(std::shared_ptr<const Game> g_a, std::shared_ptr<const Game> g_b,
                                           const Strategy& sigma_a, const Strategy& sigma_b, std::size_t k,
                                           std::size_t trials, std::uint64_t seed,
                                           const std::function<Strategy(const Strategy&)>& mirror) {
  TraceInclusionReport rep;
  std::vector<Strategy> candidates;
  for (std::size_t j = 0; j < trials; ++j)
    candidates.push_back(random_strategy(g_a, mix_seed(seed, 2 * j + 1)));

  for (std::size_t i = 0; i < trials; ++i) {
    Strategy env_b = random_strategy(g_b, mix_seed(seed, 2 * i));
    const Trace tb = trace_of(*g_b, play(*g_b, sigma_b, env_b, k));
    ++rep.plays;
    bool found = false;
    if (mirror) {
      Strategy env_a = mirror(env_b);
      found = trace_of(*g_a, play(*g_a, sigma_a, env_a, k)) == tb;
    }
    for (std::size_t j = 0; !found && j < candidates.size(); ++j)
      found = trace_of(*g_a, play(*g_a, sigma_a, candidates[j], k)) == tb;
    if (found)
      ++rep.matched;
    else
      rep.unmatched.push_back(tb);
  }
  return rep;
}

} // namespace hgame
