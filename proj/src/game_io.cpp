#include "hgame/game_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>

namespace hgame {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ParseError(path, msg); }

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!j.is_object())
    fail(path, "expected an object");
  for (const char* k : required)
    if (!j.contains(k))
      fail(path + "." + k, "missing field");
  for (const auto& [k, v] : j.items()) {
    auto is = [&](const char* a) { return k == a; };
    if (std::none_of(required.begin(), required.end(), is) && std::none_of(optional.begin(), optional.end(), is))
      fail(path + "." + k, "unknown field");
  }
}

const std::string& str_at(const json& j, const std::string& path) {
  if (!j.is_string())
    fail(path, "expected a string");
  return j.get_ref<const std::string&>();
}

Rational rational_at(const json& j, const std::string& path) {
  const std::string& s = str_at(j, path);
  auto r = Rational::parse_canonical(s);
  if (!r)
    fail(path, "non-canonical rational \"" + s + "\"");
  return *r;
}

std::vector<std::string> strings_at(const json& j, const std::string& path) {
  if (!j.is_array())
    fail(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(str_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t var_index(const std::vector<std::string>& vars, const std::string& name, const std::string& path) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end())
    fail(path, "unknown variable \"" + name + "\"");
  return static_cast<std::size_t>(it - vars.begin());
}

std::vector<std::optional<Rational>> var_map(const json& j, const std::vector<std::string>& vars,
                                             const std::string& path) {
  if (!j.is_object())
    fail(path, "expected an object");
  std::vector<std::optional<Rational>> out(vars.size());
  for (const auto& [k, v] : j.items()) {
    const std::size_t x = var_index(vars, k, path + "." + k);
    if (!v.is_null())
      out[x] = rational_at(v, path + "." + k);
  }
  return out;
}

LocationId id_from_json(const json& j, const std::vector<std::string>& vars, const std::string& path) {
  if (j.is_string())
    return LocationId(j.get<std::string>());
  const bool f = j.is_object() && j.contains("f");
  check_keys(j, path, {"base", f ? "f" : "g"});
  LocationId id = id_from_json(j["base"], vars, path + ".base");
  return id.with({f ? Annotation::Kind::F : Annotation::Kind::G, var_map(j[f ? "f" : "g"], vars, path + (f ? ".f" : ".g"))});
}

json values_json(const std::vector<std::optional<Rational>>& vals, std::span<const std::string> vars) {
  json o = json::object();
  for (std::size_t i = 0; i < vals.size(); ++i)
    o[vars[i]] = vals[i] ? json(vals[i]->str()) : json(nullptr);
  return o;
}

json id_to_json(const LocationId& id, std::span<const std::string> vars) {
  if (!id.annotated())
    return id.base;
  return json{{"base", id_to_json(id.stripped(), vars)},
              {id.outer().kind == Annotation::Kind::F ? "f" : "g", values_json(id.outer().values, vars)}};
}

std::string sha256_hex(const std::string& text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("malformed JSON: ") + e.what());
  }
}

json move_json(const Game& g, std::size_t edge, const Rational& delay) {
  return json{{"edge", g.edge(edge).id}, {"delay", delay.str()}};
}

std::pair<std::size_t, Rational> move_from_json(const json& j, const Game& g, const std::string& path) {
  check_keys(j, path, {"edge", "delay"});
  auto e = g.find_edge(str_at(j["edge"], path + ".edge"));
  if (!e)
    fail(path + ".edge", "unknown edge");
  return {*e, rational_at(j["delay"], path + ".delay")};
}

} // namespace

Game game_from_json(const json& j) {
  check_keys(j, "$", {"flavor", "vars", "actions", "obs", "init", "locations", "edges"});
  GameData d;
  auto fl = parse_flavor(str_at(j["flavor"], "$.flavor"));
  if (!fl)
    fail("$.flavor", "unknown flavor");
  d.flavor = *fl;
  d.vars = strings_at(j["vars"], "$.vars");
  d.actions = strings_at(j["actions"], "$.actions");
  d.observations = strings_at(j["obs"], "$.obs");
  if (std::set<std::string>(d.vars.begin(), d.vars.end()).size() != d.vars.size())
    fail("$.vars", "duplicate variable");

  const json& locs = j["locations"];
  if (!locs.is_object())
    fail("$.locations", "expected an object");
  std::map<std::string, std::size_t> by_key;
  for (const auto& [key, lj] : locs.items()) {
    const std::string path = "$.locations." + key;
    check_keys(lj, path, {"owner", "obs", "flow"}, {"id"});
    Location l;
    l.id = lj.contains("id") ? id_from_json(lj["id"], d.vars, path + ".id") : LocationId(key);
    if (l.id.str(d.vars) != key)
      fail(path, "key differs from the canonical form " + l.id.str(d.vars) + " of its id");
    if (!lj["owner"].is_number_integer() || (lj["owner"] != 1 && lj["owner"] != 2))
      fail(path + ".owner", "expected 1 or 2");
    l.owner = lj["owner"] == 1 ? Player::One : Player::Two;
    l.obs = str_at(lj["obs"], path + ".obs");
    auto flow = var_map(lj["flow"], d.vars, path + ".flow");
    for (std::size_t x = 0; x < flow.size(); ++x) {
      if (!flow[x])
        fail(path + ".flow." + d.vars[x], "missing slope");
      l.flow.push_back(*flow[x]);
    }
    by_key[key] = d.locations.size();
    d.locations.push_back(std::move(l));
  }
  auto resolve = [&](const std::string& key) {
    auto it = by_key.find(key);
    return it == by_key.end() ? d.locations.size() : it->second;
  };
  d.init = resolve(str_at(j["init"], "$.init"));

  const json& edges = j["edges"];
  if (!edges.is_array())
    fail("$.edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "$.edges[" + std::to_string(i) + "]";
    const json& ej = edges[i];
    check_keys(ej, path, {"id", "src", "action", "guard", "reset", "dst"}, {"provenance"});
    Edge e;
    e.id = str_at(ej["id"], path + ".id");
    e.src = resolve(str_at(ej["src"], path + ".src"));
    e.dst = resolve(str_at(ej["dst"], path + ".dst"));
    e.action = str_at(ej["action"], path + ".action");
    if (ej.contains("provenance"))
      e.provenance = str_at(ej["provenance"], path + ".provenance");
    const json& gj = ej["guard"];
    if (!gj.is_object())
      fail(path + ".guard", "expected an object");
    e.guard.conjuncts.resize(d.vars.size());
    for (const auto& [k, b] : gj.items()) {
      const std::string bp = path + ".guard." + k;
      const std::size_t x = var_index(d.vars, k, bp);
      if (!b.is_array() || b.size() != 2)
        fail(bp, "expected [lo, hi]");
      Interval iv;
      if (!b[0].is_null())
        iv.lo = rational_at(b[0], bp + "[0]");
      if (!b[1].is_null())
        iv.hi = rational_at(b[1], bp + "[1]");
      e.guard.conjuncts[x] = iv;
    }
    e.reset.values = var_map(ej["reset"], d.vars, path + ".reset");
    d.edges.push_back(std::move(e));
  }
  return Game(std::move(d));
}

Game parse_game(const std::string& text) { return game_from_json(parse_json(text)); }

json game_to_json(const Game& g) {
  const auto vars = g.vars();
  json j;
  j["flavor"] = std::string(to_string(g.flavor()));
  j["vars"] = g.data().vars;
  j["actions"] = g.data().actions;
  j["obs"] = g.data().observations;
  j["init"] = g.init() < g.locations().size() ? g.location_key(g.init()) : "";
  json locs = json::object();
  for (std::size_t i = 0; i < g.locations().size(); ++i) {
    const Location& l = g.location(i);
    json lj{{"owner", l.owner == Player::One ? 1 : 2}, {"obs", l.obs}};
    json flow = json::object();
    for (std::size_t x = 0; x < l.flow.size(); ++x)
      flow[vars[x]] = l.flow[x].str();
    lj["flow"] = flow;
    if (l.id.annotated())
      lj["id"] = id_to_json(l.id, vars);
    locs[g.location_key(i)] = lj;
  }
  j["locations"] = locs;
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    auto key = [&](std::size_t l) { return l < g.locations().size() ? g.location_key(l) : std::string(); };
    json ej{{"id", e.id}, {"src", key(e.src)}, {"dst", key(e.dst)}, {"action", e.action}};
    json guard = json::object();
    for (std::size_t x = 0; x < e.guard.conjuncts.size(); ++x)
      if (const auto& c = e.guard.conjuncts[x])
        guard[vars[x]] = json::array({c->lo ? json(c->lo->str()) : json(nullptr),
                                      c->hi ? json(c->hi->str()) : json(nullptr)});
    ej["guard"] = guard;
    json reset = json::object();
    for (std::size_t x = 0; x < e.reset.values.size(); ++x)
      if (const auto& r = e.reset.values[x])
        reset[vars[x]] = r->str();
    ej["reset"] = reset;
    if (e.provenance)
      ej["provenance"] = *e.provenance;
    edges.push_back(ej);
  }
  j["edges"] = edges;
  return j;
}

std::string emit_game(const Game& g) { return game_to_json(g).dump(2) + "\n"; }

std::string game_hash(const Game& g) { return sha256_hex(emit_game(g)); }

json region_to_json(const Region& r, std::span<const std::string> vars, const std::vector<long>& max_const) {
  json ints = json::object();
  json above = json::array(), zero = json::array(), classes = json::array();
  int top = 0;
  for (std::size_t x = 0; x < r.ipart.size(); ++x) {
    if (is_above(r, x, max_const)) {
      above.push_back(vars[x]);
      continue;
    }
    ints[vars[x]] = r.ipart[x];
    if (r.frac[x] == 0)
      zero.push_back(vars[x]);
    top = std::max(top, r.frac[x]);
  }
  for (int k = 1; k <= top; ++k) {
    json cls = json::array();
    for (std::size_t x = 0; x < r.frac.size(); ++x)
      if (r.frac[x] == k)
        cls.push_back(vars[x]);
    classes.push_back(cls);
  }
  return json{{"int", ints}, {"above", above}, {"zero", zero}, {"frac", classes}};
}

Region region_from_json(const json& j, std::span<const std::string> vars, const std::vector<long>& max_const) {
  check_keys(j, "region", {"int", "above", "zero", "frac"});
  const std::vector<std::string> names(vars.begin(), vars.end());
  const std::size_t n = vars.size();
  Region r{std::vector<long>(n, 0), std::vector<int>(n, -2)};
  for (const auto& v : strings_at(j["above"], "region.above")) {
    const std::size_t x = var_index(names, v, "region.above");
    r.ipart[x] = max_const[x] + 1;
    r.frac[x] = -1;
  }
  if (!j["int"].is_object())
    fail("region.int", "expected an object");
  for (const auto& [k, v] : j["int"].items()) {
    const std::size_t x = var_index(names, k, "region.int." + k);
    if (!v.is_number_integer() || v.get<long>() < 0 || v.get<long>() > max_const[x])
      fail("region.int." + k, "integer part out of range");
    r.ipart[x] = v.get<long>();
  }
  for (const auto& v : strings_at(j["zero"], "region.zero"))
    r.frac[var_index(names, v, "region.zero")] = 0;
  if (!j["frac"].is_array())
    fail("region.frac", "expected an array");
  for (std::size_t k = 0; k < j["frac"].size(); ++k)
    for (const auto& v : strings_at(j["frac"][k], "region.frac"))
      r.frac[var_index(names, v, "region.frac")] = static_cast<int>(k) + 1;
  for (std::size_t x = 0; x < n; ++x)
    if (r.frac[x] == -2)
      fail("region", "clock " + names[x] + " is not described");
  return r;
}

StrategyFile make_strategy_file(const Game& source, const Game& timed, const RegionGame& rg, const Solution& sol,
                                const std::string& objective) {
  StrategyFile s;
  s.game = game_hash(timed);
  s.source = game_hash(source);
  s.objective = objective;
  s.init_winning = sol.init_winning(rg);
  s.scale = rg.factor;
  s.max_const = rg.max_const;
  for (std::size_t i = 0; i < rg.nodes.size(); ++i) {
    const RegionNode& n = rg.nodes[i];
    if (timed.location(n.loc).owner != Player::One || n.moves.empty())
      continue;
    auto it = sol.strategy.choice.find(i);
    const RegionMove& m = n.moves[it == sol.strategy.choice.end() ? 0 : it->second];
    const char* note = it != sol.strategy.choice.end() ? "winning" : sol.winning[i] ? "goal" : "fallback";
    s.entries.push_back({timed.location_key(n.loc), n.region, m.region, timed.edge(m.edge).id, note});
  }
  return s;
}

std::string emit_strategy(const StrategyFile& s, std::span<const std::string> vars) {
  json j;
  j["game"] = s.game;
  j["source"] = s.source;
  j["kind"] = "region-positional";
  j["objective"] = s.objective;
  j["init_winning"] = s.init_winning;
  j["scale"] = s.scale.get_str();
  json m = json::object();
  for (std::size_t x = 0; x < s.max_const.size(); ++x)
    m[vars[x]] = s.max_const[x];
  j["max"] = m;
  json entries = json::array();
  for (const auto& e : s.entries)
    entries.push_back({{"location", e.location},
                       {"region", region_to_json(e.region, vars, s.max_const)},
                       {"target", region_to_json(e.target, vars, s.max_const)},
                       {"edge", e.edge},
                       {"note", e.note}});
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

StrategyFile parse_strategy(const std::string& text, const Game& timed) {
  const json j = parse_json(text);
  check_keys(j, "$", {"game", "source", "kind", "objective", "init_winning", "scale", "max", "entries"});
  if (str_at(j["kind"], "$.kind") != "region-positional")
    fail("$.kind", "expected region-positional");
  StrategyFile s;
  s.game = str_at(j["game"], "$.game");
  s.source = str_at(j["source"], "$.source");
  s.objective = str_at(j["objective"], "$.objective");
  if (!j["init_winning"].is_boolean())
    fail("$.init_winning", "expected a boolean");
  s.init_winning = j["init_winning"].get<bool>();
  const Rational scale = rational_at(j["scale"], "$.scale");
  if (!scale.is_integer() || scale.sign() <= 0)
    fail("$.scale", "expected a positive integer");
  s.scale = scale.num();
  const std::vector<std::string> vars(timed.vars().begin(), timed.vars().end());
  s.max_const.assign(vars.size(), 0);
  if (!j["max"].is_object() || j["max"].size() != vars.size())
    fail("$.max", "expected one constant per clock");
  for (const auto& [k, v] : j["max"].items()) {
    if (!v.is_number_integer() || v.get<long>() < 0)
      fail("$.max." + k, "expected a non-negative integer");
    s.max_const[var_index(vars, k, "$.max." + k)] = v.get<long>();
  }
  if (!j["entries"].is_array())
    fail("$.entries", "expected an array");
  for (std::size_t i = 0; i < j["entries"].size(); ++i) {
    const std::string path = "$.entries[" + std::to_string(i) + "]";
    const json& ej = j["entries"][i];
    check_keys(ej, path, {"location", "region", "target", "edge", "note"});
    StrategyEntry e;
    e.location = str_at(ej["location"], path + ".location");
    e.edge = str_at(ej["edge"], path + ".edge");
    e.note = str_at(ej["note"], path + ".note");
    try {
      e.region = region_from_json(ej["region"], vars, s.max_const);
      e.target = region_from_json(ej["target"], vars, s.max_const);
    } catch (const ParseError& pe) {
      fail(path + "." + pe.path, pe.what());
    }
    bool known = false;
    for (std::size_t l = 0; l < timed.locations().size() && !known; ++l)
      known = timed.location_key(l) == e.location;
    if (!known)
      fail(path + ".location", "unknown location");
    if (!timed.find_edge(e.edge))
      fail(path + ".edge", "unknown edge");
    s.entries.push_back(std::move(e));
  }
  return s;
}

Strategy strategy_from_file(std::shared_ptr<const Game> timed, const StrategyFile& s) {
  std::map<std::string, std::size_t> loc_of;
  for (std::size_t l = 0; l < timed->locations().size(); ++l)
    loc_of[timed->location_key(l)] = l;
  std::map<std::pair<std::size_t, Region>, std::pair<Region, std::size_t>> table;
  for (const auto& e : s.entries)
    table[{loc_of.at(e.location), e.region}] = {e.target, *timed->find_edge(e.edge)};
  return [table = std::move(table), M = s.max_const, D = s.scale](const History& h) -> std::optional<Move> {
    const Configuration& q = h.last();
    const Rational d{mpq_class(D)};
    std::vector<Rational> v;
    for (const Rational& x : q.val)
      v.push_back(x * d);
    auto it = table.find({q.loc, region_of(v, M)});
    if (it == table.end())
      return std::nullopt;
    auto t = concretize_delay(M, D, q.val, it->second.first);
    if (!t)
      throw NoRealization("strategy entry cannot be realized from the current valuation");
    return Move{it->second.second, *t};
  };
}

HistoryTable::Key HistoryTable::key_of(const History& h) {
  Key k;
  for (const Step& s : h.steps)
    k.emplace_back(s.move.edge, s.move.delay);
  return k;
}

std::string emit_history_table(const HistoryTable& t, const Game& g) {
  json entries = json::array();
  for (const auto& [k, m] : t.entries) {
    json hist = json::array();
    for (const auto& [e, d] : k)
      hist.push_back(move_json(g, e, d));
    entries.push_back({{"history", hist}, {"move", move_json(g, m.edge, m.delay)}});
  }
  json j{{"game", t.game}, {"kind", "history-table"}, {"entries", entries}};
  return j.dump(2) + "\n";
}

HistoryTable parse_history_table(const std::string& text, const Game& g) {
  const json j = parse_json(text);
  check_keys(j, "$", {"game", "kind", "entries"});
  if (str_at(j["kind"], "$.kind") != "history-table")
    fail("$.kind", "expected history-table");
  HistoryTable t;
  t.game = str_at(j["game"], "$.game");
  if (!j["entries"].is_array())
    fail("$.entries", "expected an array");
  for (std::size_t i = 0; i < j["entries"].size(); ++i) {
    const std::string path = "$.entries[" + std::to_string(i) + "]";
    const json& ej = j["entries"][i];
    check_keys(ej, path, {"history", "move"});
    if (!ej["history"].is_array())
      fail(path + ".history", "expected an array");
    HistoryTable::Key k;
    for (std::size_t s = 0; s < ej["history"].size(); ++s)
      k.push_back(move_from_json(ej["history"][s], g, path + ".history[" + std::to_string(s) + "]"));
    auto [e, d] = move_from_json(ej["move"], g, path + ".move");
    t.entries[k] = Move{e, d};
  }
  return t;
}

Strategy strategy_from_table(HistoryTable t) {
  return [t = std::move(t)](const History& h) -> std::optional<Move> {
    auto it = t.entries.find(HistoryTable::key_of(h));
    if (it == t.entries.end())
      return std::nullopt;
    return it->second;
  };
}

} // namespace hgame
