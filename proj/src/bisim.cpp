#include "hgame/bisim.hpp"

#include <exception>
#include <map>
#include <set>

#include "hgame/strategy.hpp"
#include "hgame/to_stopwatch.hpp"
#include "hgame/to_timed.hpp"
#include "hgame/to_updatable.hpp"

namespace hgame {

namespace {

using GamePtr = std::shared_ptr<const Game>;

bool valid(const Game& g, const Configuration& q) { return q.loc < g.locations().size() && q.val.size() == g.dim(); }

// Right edge at qr whose provenance is the left edge, same delay.
auto forward_by_provenance(GamePtr left, GamePtr right) {
  return [left, right](const Configuration&, const Configuration& qr, const Move& m) -> std::optional<Move> {
    auto e = right->edge_with_provenance(qr.loc, left->edge(m.edge).id);
    if (!e)
      return std::nullopt;
    return Move{*e, m.delay};
  };
}

auto backward_by_provenance(GamePtr left, GamePtr right) {
  return [left, right](const Configuration& ql, const Configuration&, const Move& m) -> std::optional<Move> {
    const auto& prov = right->edge(m.edge).provenance;
    if (!prov)
      return std::nullopt;
    auto e = left->find_edge(*prov);
    if (!e || left->edge(*e).src != ql.loc)
      return std::nullopt;
    return Move{*e, m.delay};
  };
}

std::size_t locate(const Game& g, const LocationId& id) {
  auto l = g.find_location(id);
  if (!l)
    throw std::out_of_range("no location " + id.str(g.vars()));
  return *l;
}

} // namespace

std::string_view to_string(FailKind k) {
  switch (k) {
  case FailKind::NotRelated: return "not-related";
  case FailKind::LabelMismatch: return "label-mismatch";
  case FailKind::NoMatchingMove: return "no-matching-move";
  case FailKind::MatchNotEnabled: return "match-not-enabled";
  case FailKind::SuccessorNotRelated: return "successor-not-related";
  case FailKind::OwnerMismatch: return "owner-mismatch";
  }
  return "?";
}

BisimWitness identity_witness(GamePtr g) {
  BisimWitness w;
  w.name = "identity";
  w.left = w.right = g;
  w.related = [](const Configuration& a, const Configuration& b) { return a == b; };
  w.backward = [](const Configuration& q) { return q; };
  w.move_forward = [](const Configuration&, const Configuration&, const Move& m) { return std::optional<Move>(m); };
  w.move_backward = w.move_forward;
  return w;
}

BisimWitness gamma1_witness(GamePtr isr, GamePtr stopwatch) {
  BisimWitness w;
  w.name = "gamma1";
  w.left = isr;
  w.right = stopwatch;
  w.related = [isr, stopwatch](const Configuration& qs, const Configuration& qw) {
    if (!valid(*isr, qs) || !valid(*stopwatch, qw))
      return false;
    return isr->location(qs.loc).id == stopwatch->location(qw.loc).id && gamma1(*isr, qs).val == qw.val;
  };
  w.backward = [isr, stopwatch](const Configuration& qw) {
    return gamma1_inv(*isr, {locate(*isr, stopwatch->location(qw.loc).id), qw.val});
  };
  w.move_forward = forward_by_provenance(isr, stopwatch);
  w.move_backward = backward_by_provenance(isr, stopwatch);
  return w;
}

BisimWitness beta1_witness(GamePtr stopwatch, GamePtr annotated) {
  BisimWitness w;
  w.name = "beta1";
  w.left = stopwatch;
  w.right = annotated;
  w.related = [stopwatch, annotated](const Configuration& qw, const Configuration& qa) {
    if (!valid(*stopwatch, qw) || !valid(*annotated, qa))
      return false;
    const LocationId& id = annotated->location(qa.loc).id;
    return id.annotated() && id.stripped() == stopwatch->location(qw.loc).id && qw.val == qa.val;
  };
  w.backward = [stopwatch, annotated](const Configuration& qa) {
    return Configuration{locate(*stopwatch, annotated->location(qa.loc).id.stripped()), qa.val};
  };
  w.move_forward = forward_by_provenance(stopwatch, annotated);
  w.move_backward = backward_by_provenance(stopwatch, annotated);
  return w;
}

BisimWitness beta2_witness(GamePtr annotated, GamePtr updatable) {
  BisimWitness w;
  w.name = "beta2";
  w.left = annotated;
  w.right = updatable;
  w.related = [annotated, updatable](const Configuration& qa, const Configuration& qu) {
    if (!valid(*annotated, qa) || !valid(*updatable, qu))
      return false;
    return annotated->location(qa.loc).id == updatable->location(qu.loc).id && qa.val == qu.val;
  };
  w.backward = [annotated, updatable](const Configuration& qu) {
    return Configuration{locate(*annotated, updatable->location(qu.loc).id), qu.val};
  };
  w.move_forward = forward_by_provenance(annotated, updatable);
  w.move_backward = backward_by_provenance(annotated, updatable);
  return w;
}

BisimWitness beta_witness(GamePtr stopwatch, GamePtr annotated, GamePtr updatable) {
  BisimWitness w;
  w.name = "beta";
  w.left = stopwatch;
  w.right = updatable;
  w.related = [stopwatch, updatable](const Configuration& qw, const Configuration& qu) {
    if (!valid(*stopwatch, qw) || !valid(*updatable, qu))
      return false;
    return beta_contains(*stopwatch, qw, *updatable, qu);
  };
  w.backward = [stopwatch, updatable](const Configuration& qu) {
    return Configuration{locate(*stopwatch, updatable->location(qu.loc).id.stripped()), qu.val};
  };
  w.move_forward = [stopwatch, annotated, updatable](const Configuration&, const Configuration& qu,
                                                     const Move& m) -> std::optional<Move> {
    const std::string& wid = stopwatch->edge(m.edge).id;
    for (std::size_t e : updatable->out_edges(qu.loc)) {
      const auto& prov = updatable->edge(e).provenance;
      auto ea = prov ? annotated->find_edge(*prov) : std::nullopt;
      if (ea && annotated->edge(*ea).provenance == wid)
        return Move{e, m.delay};
    }
    return std::nullopt;
  };
  w.move_backward = [stopwatch, annotated, updatable](const Configuration& qw, const Configuration&,
                                                      const Move& m) -> std::optional<Move> {
    const auto& prov = updatable->edge(m.edge).provenance;
    auto ea = prov ? annotated->find_edge(*prov) : std::nullopt;
    if (!ea || !annotated->edge(*ea).provenance)
      return std::nullopt;
    auto e = stopwatch->find_edge(*annotated->edge(*ea).provenance);
    if (!e || stopwatch->edge(*e).src != qw.loc)
      return std::nullopt;
    return Move{*e, m.delay};
  };
  return w;
}

BisimWitness gamma2_witness(GamePtr updatable, GamePtr timed) {
  BisimWitness w;
  w.name = "gamma2";
  w.left = updatable;
  w.right = timed;
  w.related = [updatable, timed](const Configuration& qu, const Configuration& qt) {
    if (!valid(*updatable, qu) || !valid(*timed, qt))
      return false;
    const LocationId& id = timed->location(qt.loc).id;
    if (!id.annotated() || id.stripped() != updatable->location(qu.loc).id)
      return false;
    return gamma2(*timed, qt.loc, qu).val == qt.val;
  };
  w.backward = [updatable, timed](const Configuration& qt) { return gamma2_inv(*timed, *updatable, qt); };
  w.move_forward = forward_by_provenance(updatable, timed);
  w.move_backward = backward_by_provenance(updatable, timed);
  return w;
}

BisimWitness compose(const BisimWitness& ab, const BisimWitness& bc) {
  BisimWitness w;
  w.name = ab.name + "." + bc.name;
  w.left = ab.left;
  w.right = bc.right;
  auto back = bc.backward;
  w.related = [ab, bc](const Configuration& qa, const Configuration& qc) {
    if (!valid(*bc.right, qc))
      return false;
    Configuration qb;
    try {
      qb = bc.backward(qc);
    } catch (const std::exception&) {
      return false;
    }
    return bc.related(qb, qc) && ab.related(qa, qb);
  };
  w.backward = [ab, bc](const Configuration& qc) { return ab.backward(bc.backward(qc)); };
  w.move_forward = [ab, bc](const Configuration& qa, const Configuration& qc, const Move& m) -> std::optional<Move> {
    const Configuration qb = bc.backward(qc);
    auto mb = ab.move_forward(qa, qb, m);
    return mb ? bc.move_forward(qb, qc, *mb) : std::nullopt;
  };
  w.move_backward = [ab, bc](const Configuration& qa, const Configuration& qc, const Move& m) -> std::optional<Move> {
    const Configuration qb = bc.backward(qc);
    auto mb = bc.move_backward(qb, qc, m);
    return mb ? ab.move_backward(qa, qb, *mb) : std::nullopt;
  };
  return w;
}

namespace {

struct Successors {
  Configuration left;
  Configuration right;
};

// Successor pair of a counterexample move and its image, when both are legal.
std::optional<Successors> successors(const BisimWitness& w, const Counterexample& c) {
  if (!c.move)
    return std::nullopt;
  const bool from_left = c.side == Side::Left;
  const Game& own = from_left ? *w.left : *w.right;
  const Game& other = from_left ? *w.right : *w.left;
  const Configuration& q = from_left ? c.left : c.right;
  const Configuration& qo = from_left ? c.right : c.left;
  if (!enabled(own, q, *c.move))
    return std::nullopt;
  auto mapped = from_left ? w.move_forward(c.left, c.right, *c.move) : w.move_backward(c.left, c.right, *c.move);
  if (!mapped || !enabled(other, qo, *mapped))
    return std::nullopt;
  Configuration s = step(own, q, *c.move);
  Configuration so = step(other, qo, *mapped);
  return from_left ? Successors{s, so} : Successors{so, s};
}

} // namespace

Verdict check_local_bisim(const BisimWitness& w, const Configuration& q1, const Configuration& q2,
                          const DelaySampler& sampler, std::uint64_t seed, CheckMode mode) {
  const Game& L = *w.left;
  const Game& R = *w.right;
  Verdict v;
  auto fail = [&](FailKind k, Side side, std::optional<Move> m, std::string detail) {
    v.pass = false;
    v.failure = Counterexample{k, side, q1, q2, std::move(m), std::move(detail)};
    return v;
  };

  if (!w.related(q1, q2))
    return fail(FailKind::NotRelated, Side::Left, std::nullopt, "pair is not in the relation");
  const Player p = owner(L, q1);
  if (p != owner(R, q2))
    throw OwnershipMismatch(w.name + ": related configurations have different owners");
  if (observation(L, q1) != observation(R, q2))
    return fail(FailKind::LabelMismatch, Side::Left, std::nullopt,
                observation(L, q1) + " vs " + observation(R, q2));

  std::mt19937_64 rng(seed);
  for (Side side : {Side::Left, Side::Right}) {
    const bool from_left = side == Side::Left;
    if (mode == CheckMode::Simulation && (from_left ? p != Player::One : p != Player::Two))
      continue;
    const Game& own = from_left ? L : R;
    const Game& other = from_left ? R : L;
    const Configuration& q = from_left ? q1 : q2;
    const Configuration& qo = from_left ? q2 : q1;
    for (std::size_t e : own.out_edges(q.loc)) {
      auto window = delay_window(own, q, e);
      if (!window)
        continue;
      for (const Rational& t : sampler.delays(*window, rng)) {
        const Move m{e, t};
        ++v.moves_checked;
        auto mapped = from_left ? w.move_forward(q1, q2, m) : w.move_backward(q1, q2, m);
        if (!mapped)
          return fail(FailKind::NoMatchingMove, side, m, "edge " + own.edge(e).id + " has no counterpart");
        if (!enabled(other, qo, *mapped))
          return fail(FailKind::MatchNotEnabled, side, m,
                      "edge " + other.edge(mapped->edge).id + " not enabled after delay " + mapped->delay.str());
        const Configuration s = step(own, q, m);
        const Configuration so = step(other, qo, *mapped);
        const Configuration& sl = from_left ? s : so;
        const Configuration& sr = from_left ? so : s;
        if (owner(L, sl) != owner(R, sr))
          return fail(FailKind::OwnerMismatch, side, m, "successors owned by different players");
        if (!w.related(sl, sr))
          return fail(FailKind::SuccessorNotRelated, side, m, "successors " + L.location_key(sl.loc) + " and " +
                                                                  R.location_key(sr.loc) + " are not related");
        if (observation(L, sl) != observation(R, sr))
          return fail(FailKind::LabelMismatch, side, m, observation(L, sl) + " vs " + observation(R, sr));
      }
    }
  }
  return v;
}

bool replay(const BisimWitness& w, const Counterexample& c) {
  const Game& L = *w.left;
  const Game& R = *w.right;
  if (!valid(L, c.left) || !valid(R, c.right))
    return c.kind == FailKind::NotRelated;
  switch (c.kind) {
  case FailKind::NotRelated:
    return !w.related(c.left, c.right);
  case FailKind::LabelMismatch:
    if (!c.move)
      return observation(L, c.left) != observation(R, c.right);
    if (auto s = successors(w, c))
      return observation(L, s->left) != observation(R, s->right);
    return false;
  case FailKind::OwnerMismatch:
    if (!c.move)
      return owner(L, c.left) != owner(R, c.right);
    if (auto s = successors(w, c))
      return owner(L, s->left) != owner(R, s->right);
    return false;
  case FailKind::SuccessorNotRelated:
    if (auto s = successors(w, c))
      return !w.related(s->left, s->right);
    return false;
  case FailKind::NoMatchingMove:
  case FailKind::MatchNotEnabled: {
    if (!c.move)
      return false;
    const bool from_left = c.side == Side::Left;
    if (!enabled(from_left ? L : R, from_left ? c.left : c.right, *c.move))
      return false;
    auto mapped = from_left ? w.move_forward(c.left, c.right, *c.move) : w.move_backward(c.left, c.right, *c.move);
    if (c.kind == FailKind::NoMatchingMove)
      return !mapped;
    return mapped && !enabled(from_left ? R : L, from_left ? c.right : c.left, *mapped);
  }
  }
  return false;
}

namespace {

Verdict check_one(const BisimWitness& w, const RelatedPair& pr, const DelaySampler& sampler, std::uint64_t seed) {
  try {
    return check_local_bisim(w, pr.left, pr.right, sampler, seed);
  } catch (const OwnershipMismatch& e) {
    return Verdict{false, 0, Counterexample{FailKind::OwnerMismatch, Side::Left, pr.left, pr.right, {}, e.what()}};
  }
}

StageReport merge(const BisimWitness& w, std::vector<Verdict>& verdicts) {
  StageReport r;
  r.stage = w.name;
  for (Verdict& v : verdicts) {
    ++r.pairs_checked;
    r.moves_checked += v.moves_checked;
    if (v.pass)
      ++r.pairs_passed;
    else
      r.failures.push_back(std::move(*v.failure));
  }
  return r;
}

} // namespace

StageReport check_pairs_serial(const BisimWitness& w, std::span<const RelatedPair> pairs, const DelaySampler& sampler,
                               std::uint64_t seed) {
  std::vector<Verdict> verdicts;
  verdicts.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    verdicts.push_back(check_one(w, pairs[i], sampler, mix_seed(seed, i)));
  return merge(w, verdicts);
}

StageReport check_pairs_parallel(const BisimWitness& w, std::span<const RelatedPair> pairs,
                                 const DelaySampler& sampler, std::uint64_t seed) {
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
  std::vector<Verdict> verdicts(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      verdicts[i] = check_one(w, pairs[i], sampler, mix_seed(seed, static_cast<std::uint64_t>(i)));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  return merge(w, verdicts);
}

bool ChainReport::passed() const {
  for (const auto& s : stages)
    if (!s.passed())
      return false;
  return true;
}

const StageReport* ChainReport::stage(std::string_view name) const {
  for (const auto& s : stages)
    if (s.stage == name)
      return &s;
  return nullptr;
}

std::optional<std::string> ChainReport::first_failure() const {
  for (std::string_view name : {"gamma1", "beta", "gamma2"})
    if (const auto* s = stage(name); s && !s->passed())
      return std::string(name);
  for (const auto& s : stages)
    if (!s.passed())
      return s.stage;
  return std::nullopt;
}

std::vector<LiftedHistory> sample_histories(const Chain& chain, const ChainCheckOptions& opts) {
  std::vector<LiftedHistory> out;
  std::set<std::pair<std::size_t, std::vector<Rational>>> seen;
  const std::size_t max_plays = 16 * opts.samples + 16;
  // finer delays than the strategy default, so plays spread over more valuations
  const DelayPick pick{12, 3, 0.2};
  for (std::size_t p = 0; out.size() < opts.samples && p < max_plays; ++p) {
    Strategy s1 = random_strategy(chain.isr, mix_seed(opts.seed, 2 * p), pick);
    Strategy s2 = random_strategy(chain.isr, mix_seed(opts.seed, 2 * p + 1), pick);
    const Run run = play(*chain.isr, s1, s2, opts.depth);
    const LiftedHistory lifted = lift_prefix(chain, run);
    for (std::size_t i = 0; i < lifted.isr.size() && out.size() < opts.samples; ++i) {
      const Configuration& q = lifted.isr.config(i);
      if (!seen.insert({q.loc, q.val}).second)
        continue;
      const std::size_t n = i;
      out.push_back({lifted.isr.prefix(n), lifted.stopwatch.prefix(n), lifted.annotated.prefix(n),
                     lifted.updatable.prefix(n), lifted.timed.prefix(n)});
    }
  }
  return out;
}

std::vector<BisimWitness> chain_witnesses(const Chain& chain) {
  BisimWitness g1 = gamma1_witness(chain.isr, chain.stopwatch);
  BisimWitness b1 = beta1_witness(chain.stopwatch, chain.annotated);
  BisimWitness b2 = beta2_witness(chain.annotated, chain.updatable);
  BisimWitness b = compose(b1, b2);
  b.name = "beta";
  BisimWitness g2 = gamma2_witness(chain.updatable, chain.timed);
  BisimWitness e2e = compose(compose(g1, b), g2);
  e2e.name = "end_to_end";
  return {g1, b1, b2, b, g2, e2e};
}

ChainReport verify_chain(const Chain& chain, const ChainCheckOptions& opts) {
  ChainReport rep;
  const auto samples = sample_histories(chain, opts);
  rep.samples = samples.size();
  if (opts.samples == 0)
    rep.warnings.push_back("no samples requested; every stage passes vacuously");
  else if (samples.size() < opts.samples)
    rep.warnings.push_back("only " + std::to_string(samples.size()) + " distinct reachable configurations found");

  const std::vector<BisimWitness> ws = chain_witnesses(chain);

  auto pairs = [&](Stage l, Stage r) {
    std::vector<RelatedPair> ps;
    ps.reserve(samples.size());
    for (const auto& h : samples)
      ps.push_back({h.at(l).last(), h.at(r).last()});
    return ps;
  };
  struct Job {
    const BisimWitness* w;
    Stage l, r;
  };
  const Job jobs[] = {{&ws[0], Stage::Singular, Stage::Stopwatch}, {&ws[1], Stage::Stopwatch, Stage::Annotated},
                      {&ws[2], Stage::Annotated, Stage::Updatable}, {&ws[3], Stage::Stopwatch, Stage::Updatable},
                      {&ws[4], Stage::Updatable, Stage::Timed},     {&ws[5], Stage::Singular, Stage::Timed}};
  std::uint64_t k = 0;
  for (const Job& j : jobs) {
    const auto ps = pairs(j.l, j.r);
    const std::uint64_t s = mix_seed(opts.seed, 100 + k++);
    rep.stages.push_back(opts.exec == Exec::Serial ? check_pairs_serial(*j.w, ps, opts.sampler, s)
                                                   : check_pairs_parallel(*j.w, ps, opts.sampler, s));
  }
  return rep;
}

ChainReport verify_chain(const Game& isr, const ChainCheckOptions& opts) {
  return verify_chain(Chain::build(isr), opts);
}

} // namespace hgame
