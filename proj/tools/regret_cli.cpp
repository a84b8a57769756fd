#include "regret/reductions.hpp"
#include "regret/regret_all.hpp"
#include "regret/regret_positional.hpp"
#include "regret/regret_word.hpp"
#include "regret/values.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace regret;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kInput = 3, kBudget = 4 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json rat(const Rational& r) { return r.str(); }
json dec(const Rational& r) { return r.decimal(10); }

bool looks_like_automaton(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "alphabet" || kw == "state" || kw == "trans") return true;
    if (kw == "eve" || kw == "adam" || kw == "edge") return false;
  }
  return false;
}

WeightedArena load_arena(const std::string& path) {
  auto text = read_file(path);
  if (looks_like_automaton(text)) throw InputError(path + ": expected an arena, found an automaton");
  return parse_arena(text);
}

WeightedAutomaton load_automaton(const std::string& path) {
  auto text = read_file(path);
  if (!looks_like_automaton(text)) throw InputError(path + ": expected an automaton, found an arena");
  return parse_automaton(text);
}

json positional_json(const WeightedArena& g, const PositionalStrategy& s) {
  json j = json::object();
  for (int v = 0; v < g.size(); ++v)
    if (s.choice[v] >= 0) j[g.names[v]] = g.names[s.choice[v]];
  return j;
}

PositionalStrategy positional_from(const WeightedArena& g, const json& j, Player who) {
  PositionalStrategy s{who, std::vector<int>(g.size(), -1)};
  for (int v = 0; v < g.size(); ++v) {
    if (g.owner[v] != who) continue;
    if (!j.contains(g.names[v])) throw InputError("strategy has no move for " + g.names[v]);
    int t = g.find(j.at(g.names[v]).get<std::string>());
    if (t < 0 || g.edge_index(v, t) < 0) throw InputError("strategy move at " + g.names[v] + " is not an edge");
    s.choice[v] = t;
  }
  return s;
}

json counter_json(const WeightedArena& g, const CounterStrategy& c) {
  json table = json::array();
  for (auto& row : c.table) table.push_back(positional_json(g, {Player::Eve, row}));
  return {{"kind", "counter"}, {"k", c.k}, {"table", table}, {"post", positional_json(g, c.post)}};
}

json resolution_json(const WeightedAutomaton& a, const ResolutionStrategy& s) {
  json j = json::array();
  for (int q = 0; q < a.size(); ++q)
    for (int x = 0; x < (int)a.alphabet.size(); ++x) {
      if (a.out[q][x].size() < 2) continue;
      auto& t = a.trans[s(q, x)];
      int idx = 0;
      while (a.out[q][x][idx] != s(q, x)) ++idx;
      j.push_back({{"state", a.states[q]}, {"symbol", a.alphabet[x]}, {"to", a.states[t.dst]},
                   {"weight", rat(t.w)}, {"index", idx}});
    }
  return {{"kind", "resolution"}, {"choice", j}};
}

ResolutionStrategy resolution_from(const WeightedAutomaton& a, const json& j) {
  auto s = default_resolution(a);
  for (auto& c : j.at("choice")) {
    int q = a.find_state(c.at("state").get<std::string>()), x = a.find_symbol(c.at("symbol").get<std::string>());
    if (q < 0 || x < 0) throw InputError("resolution names an unknown state or symbol");
    int idx = c.at("index").get<int>();
    if (idx < 0 || idx >= (int)a.out[q][x].size()) throw InputError("resolution index out of range");
    s.choice[q][x] = a.out[q][x][idx];
  }
  return s;
}

Rational parse_rational_opt(const std::string& s, const char* what) {
  Rational r;
  if (!Rational::try_parse(s, r)) throw CLI::ValidationError(std::string(what) + ": not a rational: " + s);
  return r;
}

struct Options {
  std::uint64_t budget = 10'000'000;
  bool deterministic = false;
  bool strict = false;
  std::string adversary = "all";
  std::string file, file2, out;
  std::string r = "0", eps, t, threshold, lambda = "1/2";
  int depth = 4;
};

json values_report(const Options& o) {
  auto g = load_arena(o.file);
  auto vt = compute_values(g);
  json vs = json::array();
  for (int v = 0; v < g.size(); ++v)
    vs.push_back({{"vertex", g.names[v]},
                  {"owner", g.is_eve(v) ? "eve" : "adam"},
                  {"aval", rat(vt.aval[v])},
                  {"cval", rat(vt.cval[v])},
                  {"aval_decimal", dec(vt.aval[v])},
                  {"cval_decimal", dec(vt.cval[v])}});
  return {{"mode", "values"}, {"vertices", vs}};
}

json zero_regret_report(const Options& o, SearchOptions so) {
  json r = {{"mode", "zero-regret"}, {"adversary", o.adversary}};
  if (o.adversary == "all") {
    auto g = load_arena(o.file);
    auto z = zero_regret_all(g);
    r["answer"] = z.answer;
    r["witness"] = {{"player", z.answer ? "eve" : "adam"}, {"strategy", positional_json(g, z.witness)}};
  } else if (o.adversary == "positional") {
    auto g = load_arena(o.file);
    auto z = zero_regret_positional(g, so);
    r["answer"] = z.answer;
    r["knowledge_nodes"] = z.arena.nodes.size();
  } else {
    auto a = load_automaton(o.file);
    auto z = zero_regret_word(a, so);
    r["answer"] = z.answer;
    r["witness"] = z.witness ? resolution_json(a, *z.witness) : json(nullptr);
    r["nodes"] = z.nodes;
  }
  return r;
}

json regret_report(const Options& o, SearchOptions so) {
  auto g = load_arena(o.file);
  json r = {{"mode", "regret"}, {"adversary", o.adversary}};
  Rational value;
  if (o.adversary == "all") {
    auto res = regret_all(g, so);
    value = res.value;
    r["value"] = rat(value);
    r["decimal"] = dec(value);
    r["horizon"] = res.horizon;
    r["nodes"] = res.nodes;
  } else {
    auto res = regret_positional(g, so);
    value = res.value;
    r["value"] = rat(value);
    r["decimal"] = dec(value);
    r["horizon"] = res.horizon;
    r["cutoff"] = res.cutoff;
    r["nodes"] = res.nodes;
  }
  if (!o.threshold.empty()) {
    Rational t = parse_rational_opt(o.threshold, "--threshold");
    r["threshold"] = rat(t);
    r["strict"] = o.strict;
    r["answer"] = o.strict ? value < t : value <= t;
  }
  return r;
}

json epsilon_report(const Options& o, SearchOptions so) {
  auto a = load_automaton(o.file);
  Rational r = parse_rational_opt(o.r, "--r"), eps = parse_rational_opt(o.eps, "--epsilon");
  if (eps <= 0) throw CLI::ValidationError("--epsilon must be positive");
  auto res = epsilon_gap(a, r, eps, so);
  return {{"mode", "epsilon-gap"}, {"r", rat(r)},          {"epsilon", rat(eps)},
          {"answer", res.yes ? "YES" : "NO"}, {"horizon", res.horizon}, {"states", res.states}};
}

json synth_report(const Options& o, SearchOptions so) {
  auto g = load_arena(o.file);
  Rational t = parse_rational_opt(o.t, "--t");
  auto s = synth_otp(g, t);
  auto c = to_counter(g, s);
  Rational reg = eval_strategy_regret(g, s, so);
  return {{"mode", "synth"},
          {"t", rat(t)},
          {"switch_depth", s.switch_depth},
          {"regret", rat(reg)},
          {"decimal", dec(reg)},
          {"strategy", counter_json(g, c)}};
}

json eval_report(const Options& o, SearchOptions so) {
  json sj;
  try {
    std::ifstream in(o.file2);
    if (!in) throw InputError("cannot read " + o.file2);
    sj = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(o.file2 + ": " + e.what());
  }
  if (sj.contains("strategy")) sj = sj["strategy"];
  auto text = read_file(o.file);
  json r = {{"mode", "eval"}};
  try {
    std::string kind = sj.at("kind").get<std::string>();
    Rational value;
    if (looks_like_automaton(text)) {
      if (kind != "resolution") throw InputError("automata take a resolution strategy");
      auto a = parse_automaton(text);
      value = strategy_regret_word(a, resolution_from(a, sj));
    } else {
      auto g = parse_arena(text);
      CounterStrategy c;
      if (kind == "positional") {
        c.post = positional_from(g, sj.at("choice"), Player::Eve);
      } else if (kind == "counter") {
        c.k = sj.at("k").get<long>();
        for (auto& row : sj.at("table")) c.table.push_back(positional_from(g, row, Player::Eve).choice);
        if ((long)c.table.size() != c.k) throw InputError("counter table length differs from k");
        c.post = positional_from(g, sj.at("post"), Player::Eve);
      } else {
        throw InputError("arenas take a positional or counter strategy");
      }
      try {
        value = eval_strategy_regret(g, c, true, so);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
    }
    r["kind"] = kind;
    r["value"] = rat(value);
    r["decimal"] = dec(value);
  } catch (const json::exception& e) {
    throw InputError(o.file2 + ": " + e.what());
  }
  return r;
}

json oracle_report(const Options& o, SearchOptions so) {
  Interval iv;
  if (o.adversary == "word") iv = oracle_interval_word(load_automaton(o.file), o.depth, so);
  else iv = oracle_interval_positional(load_arena(o.file), o.depth, so);
  return {{"mode", "oracle"}, {"adversary", o.adversary}, {"depth", o.depth},
          {"low", rat(iv.low)}, {"high", rat(iv.high)}, {"low_decimal", dec(iv.low)}, {"high_decimal", dec(iv.high)}};
}

json gen_report(const std::string& which, const Options& o) {
  GeneratedInstance gi;
  if (which == "aval-gadget") {
    gi = aval_gadget(load_arena(o.file));
  } else if (which == "2dp") {
    auto g = parse_two_pair_graph(read_file(o.file));
    try {
      gi = gen_2dp(g, parse_rational_opt(o.lambda, "--lambda"), parse_rational_opt(o.r, "--r"));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  } else {
    gi = gen_sat(parse_dimacs_cnf(read_file(o.file)), parse_rational_opt(o.lambda, "--lambda"));
  }
  std::string artifact = gi.arena ? format_arena(*gi.arena) : format_automaton(*gi.automaton);
  json expected = json::object();
  if (gi.expected_value) expected["value"] = rat(*gi.expected_value);
  if (gi.expected_answer) expected["answer"] = *gi.expected_answer;
  json prov = json::object();
  for (auto& [k, v] : gi.provenance) prov[k] = v;
  json r = {{"mode", "gen"},
            {"generator", which},
            {"kind", gi.arena ? "arena" : "automaton"},
            {"property", gi.property},
            {"expected", expected},
            {"checker", gi.checker},
            {"provenance", prov}};
  if (o.out.empty()) {
    r["artifact"] = artifact;
  } else {
    std::ofstream(o.out) << artifact;
    std::ofstream(o.out + ".json") << r.dump(2) << "\n";
    r["artifact_path"] = o.out;
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret of discounted-sum games and automata"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--budget", o.budget, "node budget for the searches")->capture_default_str();
  app.add_flag("--deterministic", o.deterministic, "reproducible output (omits timing)");

  auto file_opt = [&](CLI::App* c) { c->add_option("FILE", o.file, "input file")->required()->check(CLI::ExistingFile); };
  auto adversary = [&](CLI::App* c, std::vector<std::string> allowed) {
    c->add_option("--adversary", o.adversary, "adversary class")->required()->check(CLI::IsMember(allowed));
  };

  auto* values = app.add_subcommand("values", "antagonistic and co-operative values per vertex");
  file_opt(values);
  auto* zero = app.add_subcommand("zero-regret", "is the regret 0");
  adversary(zero, {"all", "positional", "word"});
  file_opt(zero);
  auto* reg = app.add_subcommand("regret", "exact regret of an arena");
  adversary(reg, {"all", "positional"});
  reg->add_option("--threshold", o.threshold, "compare the regret against p/q");
  reg->add_flag("--strict", o.strict, "strict comparison for --threshold");
  file_opt(reg);
  auto* eg = app.add_subcommand("epsilon-gap", "epsilon-gap threshold problem on an automaton");
  eg->add_option("--r", o.r, "threshold")->required();
  eg->add_option("--epsilon", o.eps, "gap")->required();
  file_opt(eg);
  auto* syn = app.add_subcommand("synth", "optimistic-then-pessimistic strategy for threshold t");
  syn->add_option("--t", o.t, "threshold")->required();
  file_opt(syn);
  auto* ev = app.add_subcommand("eval", "regret of a given Eve strategy");
  ev->add_option("--strategy", o.file2, "strategy JSON")->required()->check(CLI::ExistingFile);
  file_opt(ev);
  auto* orc = app.add_subcommand("oracle", "bracketing interval from a depth-bounded search");
  adversary(orc, {"positional", "word"});
  orc->add_option("--depth", o.depth, "search depth")->required()->check(CLI::PositiveNumber);
  file_opt(orc);
  auto* gen = app.add_subcommand("gen", "instance generators");
  gen->require_subcommand(1);
  std::string which;
  for (auto [name, help] : {std::pair{"aval-gadget", "arena whose regret encodes aVal"},
                            std::pair{"2dp", "arena from a two-pair graph (DIMACS edge format)"},
                            std::pair{"sat", "automaton from a DIMACS CNF"}}) {
    auto* c = gen->add_subcommand(name, help);
    file_opt(c);
    c->add_option("--out", o.out, "write the artifact here and the expectation to OUT.json");
    if (std::string(name) != "aval-gadget") c->add_option("--lambda", o.lambda, "discount factor")->capture_default_str();
    if (std::string(name) == "2dp") c->add_option("--r", o.r, "threshold r")->capture_default_str();
    c->callback([&which, name] { which = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  SearchOptions so;
  so.budget = o.budget;
  std::string mode = app.get_subcommands().front()->get_name();
  auto t0 = std::chrono::steady_clock::now();
  json report;
  auto finish = [&](json& r) {
    if (!o.deterministic)
      r["wall_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cout << r.dump(2) << "\n";
  };
  try {
    if (mode == "values") report = values_report(o);
    else if (mode == "zero-regret") report = zero_regret_report(o, so);
    else if (mode == "regret") report = regret_report(o, so);
    else if (mode == "epsilon-gap") report = epsilon_report(o, so);
    else if (mode == "synth") report = synth_report(o, so);
    else if (mode == "eval") report = eval_report(o, so);
    else if (mode == "oracle") report = oracle_report(o, so);
    else report = gen_report(which, o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const BudgetExceeded& e) {
    json r = {{"mode", mode}, {"error", "budget exceeded"}, {"nodes", e.nodes}, {"depth", e.depth}};
    finish(r);
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  finish(report);
  return kOk;
}
