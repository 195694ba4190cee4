#include "hgame/chain.hpp"

#include "hgame/to_stopwatch.hpp"
#include "hgame/to_timed.hpp"

namespace hgame {

std::string_view to_string(Stage s) {
  switch (s) {
  case Stage::Singular: return "singular";
  case Stage::Stopwatch: return "stopwatch";
  case Stage::Annotated: return "annotated";
  case Stage::Updatable: return "updatable";
  case Stage::Timed: return "timed";
  }
  return "?";
}

Chain Chain::build(const Game& isr, const AnnotateOptions& opts) {
  Chain c;
  c.options = opts;
  c.isr = std::make_shared<const Game>(isr);
  return c.with_stage(Stage::Singular, isr);
}

Chain Chain::with_stage(Stage s, Game g) const {
  Chain c = *this;
  auto set = [&](Stage at, Game game) {
    auto p = std::make_shared<const Game>(std::move(game));
    switch (at) {
    case Stage::Singular: c.isr = p; break;
    case Stage::Stopwatch: c.stopwatch = p; break;
    case Stage::Annotated: c.annotated = p; break;
    case Stage::Updatable: c.updatable = p; break;
    case Stage::Timed: c.timed = p; break;
    }
  };
  set(s, std::move(g));
  if (s < Stage::Stopwatch)
    set(Stage::Stopwatch, to_stopwatch(*c.isr));
  if (s < Stage::Annotated)
    set(Stage::Annotated, annotate_resets(*c.stopwatch, c.options));
  if (s < Stage::Updatable)
    set(Stage::Updatable, to_updatable(*c.annotated));
  if (s < Stage::Timed)
    set(Stage::Timed, to_timed(*c.updatable));
  return c;
}

const Game& Chain::game(Stage s) const {
  switch (s) {
  case Stage::Singular: return *isr;
  case Stage::Stopwatch: return *stopwatch;
  case Stage::Annotated: return *annotated;
  case Stage::Updatable: return *updatable;
  case Stage::Timed: return *timed;
  }
  return *isr;
}

const Run& LiftedHistory::at(Stage s) const {
  switch (s) {
  case Stage::Singular: return isr;
  case Stage::Stopwatch: return stopwatch;
  case Stage::Annotated: return annotated;
  case Stage::Updatable: return updatable;
  case Stage::Timed: return timed;
  }
  return isr;
}

namespace {

LiftedHistory lift(const Chain& chain, const History& h, bool strict) {
  const Game& S = *chain.isr;
  const Game& W = *chain.stopwatch;
  const Game& A = *chain.annotated;
  const Game& U = *chain.updatable;
  const Game& T = *chain.timed;

  if (h.start != initial_configuration(S))
    throw InvalidHistory("history does not start in the initial configuration");

  Configuration qs = h.start;
  Configuration qw{qs.loc, gamma1(S, qs).val};
  Configuration qa{A.init(), qw.val};
  Configuration qu{U.init(), qw.val};
  Configuration qt = gamma2(T, T.init(), qu);
  LiftedHistory out{{qs, {}}, {qw, {}}, {qa, {}}, {qu, {}}, {qt, {}}};

  for (const Step& st : h.steps) {
    const Move& m = st.move;
    Configuration next;
    try {
      next = step(S, qs, m);
    } catch (const MoveNotEnabled& e) {
      throw InvalidHistory(e.what());
    }
    if (next != st.config)
      throw InvalidHistory("history configuration differs from the successor of its move");

    auto ew = W.edge_with_provenance(qw.loc, S.edge(m.edge).id);
    auto ea = ew ? A.edge_with_provenance(qa.loc, W.edge(*ew).id) : std::nullopt;
    auto eu = ea ? U.edge_with_provenance(qu.loc, A.edge(*ea).id) : std::nullopt;
    auto et = eu ? T.edge_with_provenance(qt.loc, U.edge(*eu).id) : std::nullopt;
    if (!et) {
      if (strict)
        throw InvalidHistory("edge " + S.edge(m.edge).id + " has no counterpart along the chain");
      break;
    }
    qs = std::move(next);
    qw = {W.edge(*ew).dst, gamma1(S, qs).val};
    qa = {A.edge(*ea).dst, qw.val};
    qu = {U.edge(*eu).dst, qw.val};
    qt = gamma2(T, T.edge(*et).dst, qu);
    out.isr.steps.push_back({m, qs});
    out.stopwatch.steps.push_back({{*ew, m.delay}, qw});
    out.annotated.steps.push_back({{*ea, m.delay}, qa});
    out.updatable.steps.push_back({{*eu, m.delay}, qu});
    out.timed.steps.push_back({{*et, m.delay}, qt});
  }
  return out;
}

} // namespace

LiftedHistory lift_history(const Chain& chain, const History& h) { return lift(chain, h, true); }

LiftedHistory lift_prefix(const Chain& chain, const History& h) { return lift(chain, h, false); }

std::optional<std::size_t> provenance_root(const Chain& chain, Stage from, std::size_t edge, Stage to) {
  std::size_t e = edge;
  for (int st = static_cast<int>(from); st > static_cast<int>(to); --st) {
    const auto& prov = chain.game(static_cast<Stage>(st)).edge(e).provenance;
    if (!prov)
      return std::nullopt;
    auto prev = chain.game(static_cast<Stage>(st - 1)).find_edge(*prov);
    if (!prev)
      return std::nullopt;
    e = *prev;
  }
  return e;
}

History project_history(const Chain& chain, const History& h_timed) {
  const Game& S = *chain.isr;
  const Game& W = *chain.stopwatch;
  const Game& A = *chain.annotated;
  const Game& U = *chain.updatable;
  const Game& T = *chain.timed;
  auto back = [&](const Configuration& qt) {
    Configuration qu = gamma2_inv(T, U, qt);
    auto wa = W.find_location(U.location(qu.loc).id.stripped());
    if (!wa || !A.find_location(U.location(qu.loc).id))
      throw InvalidHistory("timed location has no counterpart in earlier stages");
    return gamma1_inv(S, {*wa, qu.val});
  };
  History out{back(h_timed.start), {}};
  for (const Step& st : h_timed.steps) {
    auto e = provenance_root(chain, Stage::Timed, st.move.edge, Stage::Singular);
    if (!e)
      throw InvalidHistory("timed edge " + T.edge(st.move.edge).id + " has no singular-game origin");
    out.steps.push_back({{*e, st.move.delay}, back(st.config)});
  }
  return out;
}

} // namespace hgame
