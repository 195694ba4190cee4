// Serial reference vs OpenMP kernel of the bisimulation pair checker.
//
//   bench_bisim [--games N] [--samples K] [--repeat R]

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <iostream>

#include "games.hpp"
#include "hgame/bisim.hpp"

using namespace hgame;

int main(int argc, char** argv) {
  CLI::App app{"bisimulation checker benchmark"};
  std::size_t games = 40, samples = 200, repeat = 3;
  app.add_option("--games", games);
  app.add_option("--samples", samples);
  app.add_option("--repeat", repeat);
  CLI11_PARSE(app, argc, argv);

  struct Job {
    BisimWitness w;
    std::vector<RelatedPair> pairs;
  };
  std::vector<Job> jobs;
  std::size_t total_pairs = 0;
  for (std::uint64_t s = 0; s < games; ++s) {
    const Chain c = Chain::build(testing::random_isr_game(s));
    ChainCheckOptions o;
    o.samples = samples;
    o.seed = s;
    const auto hs = sample_histories(c, o);
    Job j{chain_witnesses(c).back(), {}};
    for (const auto& h : hs)
      j.pairs.push_back({h.isr.last(), h.timed.last()});
    total_pairs += j.pairs.size();
    jobs.push_back(std::move(j));
  }

  using clock = std::chrono::steady_clock;
  auto time = [&](auto&& kernel, std::size_t& moves) {
    double best = 1e300;
    for (std::size_t r = 0; r < repeat; ++r) {
      moves = 0;
      const auto t0 = clock::now();
      for (std::size_t i = 0; i < jobs.size(); ++i)
        moves += kernel(jobs[i].w, jobs[i].pairs, DelaySampler{}, i).moves_checked;
      best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
    }
    return best;
  };
  std::size_t m_serial = 0, m_parallel = 0;
  const double ts = time(check_pairs_serial, m_serial);
  const double tp = time(check_pairs_parallel, m_parallel);

  std::cout << "end-to-end witness, " << jobs.size() << " games, " << total_pairs << " pairs, "
            << omp_get_max_threads() << " threads\n";
  std::cout << "serial   " << ts << " s  (" << m_serial << " moves)\n";
  std::cout << "parallel " << tp << " s  (" << m_parallel << " moves)\n";
  std::cout << "speedup  " << ts / tp << "\n";
  if (m_serial != m_parallel) {
    std::cerr << "kernels disagree\n";
    return 1;
  }
  return 0;
}
