// hedonic: command-line front end for solving, running and auditing
// hedonic-game mechanisms.
//
// JSON goes to stdout (or --out); a short aligned summary goes to stderr.
// Exit codes: 0 success or pass, 2 witness found, 1 error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hedonic/generators.hpp"
#include "hedonic/hedonic.hpp"
#include "hedonic/io.hpp"

using namespace hedonic;
using io::json;

namespace {

constexpr int kExitWitness = 2;
constexpr int kExitError = 1;

struct Output {
  std::string path;
  bool quiet = false;
};

void emit(const Output& out, const json& j) {
  if (out.path.empty() || out.path == "-")
    std::cout << j.dump(2) << '\n';
  else
    io::write_json_file(out.path, j);
}

void summary(const Output& out, const std::vector<std::pair<std::string, std::string>>& rows) {
  if (out.quiet) return;
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) std::cerr << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

json read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    try {
      return json::parse(std::cin);
    } catch (const json::exception& e) {
      throw ParseError(std::string("stdin: ") + e.what());
    }
  }
  return io::read_json_file(path);
}

TiePolicy policy_from(const std::string& s) {
  for (TiePolicy p : kAllTiePolicies)
    if (s == to_string(p)) return p;
  throw ParseError("unknown tie policy '" + s + "' (lexmin|split|largest|advgrand)");
}

Game game_named(const std::string& s) { return io::game_from(json(s)); }

std::vector<Rational> rationals(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

Coalition coalition_csv(const std::string& csv, int n) {
  Coalition c;
  for (const Rational& a : rationals(csv)) {
    if (denominator_of(a) != 1 || a < 1 || a > n) throw ArgumentError("coalition member " + to_string(a) + " out of range");
    c = c.with(numerator_of(a).convert_to<int>() - 1);
  }
  return c;
}

std::string str(const Partition& p) { return p.str(); }

// ---- subcommands ------------------------------------------------------------

struct SolveArgs {
  std::string input;
  std::string policy = "lexmin";
};

int cmd_solve(const SolveArgs& a, const Output& out) {
  const Instance inst = io::instance_from(read_input(a.input));
  const Partition p = optimal_partition(inst, policy_from(a.policy));
  const Rational sw = social_welfare(inst, p);
  emit(out, {{"policy", a.policy},
             {"partition", io::to_json(p)},
             {"welfare", io::rational_json(sw)},
             {"optimal_value", io::rational_json(optimal_value(inst))}});
  summary(out, {{"policy", a.policy}, {"partition", str(p)}, {"welfare", to_string(sw)}});
  return 0;
}

struct RunArgs {
  std::string input;
  std::string mechanism = "m1";
};

int cmd_run(const RunArgs& a, const Output& out) {
  const Instance inst = io::instance_from(read_input(a.input));
  const MechanismSpec spec = io::mechanism_from_name(a.mechanism, inst.weight_class(), inst.game());
  const Partition p = run(spec, inst);
  const Rational sw = social_welfare(inst, p);
  emit(out, {{"mechanism", spec.name()}, {"partition", io::to_json(p)}, {"welfare", io::rational_json(sw)}});
  summary(out, {{"mechanism", spec.name()}, {"partition", str(p)}, {"welfare", to_string(sw)}});
  return 0;
}

int cmd_repr(const std::string& input, const Output& out) {
  const Instance r = repr(io::instance_from(read_input(input)));
  emit(out, io::to_json(r));
  summary(out, {{"repr", "n=" + std::to_string(r.n())}});
  return 0;
}

struct AuditArgs {
  std::string mechanism = "m1";
  std::string space = "bounded:step=1/2";
  std::string game = "ashg";
  int n = 3;
  int jobs = 1;
  std::optional<std::uint64_t> budget;
  std::vector<int> agents;  // 1-based
  bool no_memo = false;
  // si only
  std::string cls = "arbitrary";
  int trials = 200;
  std::uint64_t seed = 1;
};

int report_audit(const AuditReport& r, const MechanismSpec& spec, const Output& out) {
  json j = io::to_json(r, spec);
  if (r.witness) j["replay"] = {{"reproduced", replay(spec, *r.witness)}};
  emit(out, j);
  std::vector<std::pair<std::string, std::string>> rows = {
      {"audit", r.audit}, {"mechanism", r.mechanism}, {"space", r.space}, {"verdict", r.passed() ? "pass" : "witness"}};
  if (r.witness) {
    if (const auto* mw = std::get_if<ManipulationWitness>(&*r.witness)) {
      rows.emplace_back("condition", to_string(mw->condition));
      rows.emplace_back("agent", std::to_string(mw->agent + 1));
      rows.emplace_back("true type", j["witness"]["true_type"]["values"].dump());
      rows.emplace_back("manipulation", j["witness"]["manipulation"]["values"].dump());
      rows.emplace_back("truthful", str(mw->truthful.outcome) + "  u=" + to_string(mw->truthful.utility));
      rows.emplace_back("manipulated", str(mw->manipulated.outcome) + "  u=" + to_string(mw->manipulated.utility));
    } else {
      const auto& sw = std::get<ScaleWitness>(*r.witness);
      rows.emplace_back("lambda", to_string(sw.lambda));
      rows.emplace_back("outcomes", str(sw.original_outcome) + " vs " + str(sw.scaled_outcome));
    }
  }
  rows.emplace_back("profiles", std::to_string(r.stats.profiles));
  rows.emplace_back("millis", std::to_string(r.stats.millis));
  summary(out, rows);
  return r.passed() ? 0 : kExitWitness;
}

int cmd_audit(const std::string& which, const AuditArgs& a, const Output& out) {
  const Game game = game_named(a.game);
  if (which == "si") {
    const MechanismSpec spec = io::mechanism_from_name(a.mechanism, io::weight_class_from(json(a.cls)), game);
    return report_audit(audit_si(spec, a.trials, a.seed), spec, out);
  }
  const DeclarationSpace space = io::space_from_string(a.space, a.n);
  const MechanismSpec spec = io::mechanism_from_name(a.mechanism, space.weight_class(), game);
  AuditOptions opt;
  opt.jobs = a.jobs;
  opt.memoize = !a.no_memo;
  if (a.budget) opt.budget = *a.budget;
  for (int agent : a.agents) opt.agents.push_back(agent - 1);
  return report_audit(which == "nom" ? audit_nom(spec, space, opt) : audit_sp(spec, space, opt), spec, out);
}

int cmd_replay(const std::string& path, const Output& out) {
  const json report = read_input(path);
  const MechanismSpec spec = io::mechanism_from(io::field(report, "mechanism"));
  const bool ok = replay(spec, io::witness_from(io::field(report, "witness")));
  emit(out, {{"mechanism", spec.name()}, {"reproduced", ok}});
  summary(out, {{"mechanism", spec.name()}, {"reproduced", ok ? "yes" : "no"}});
  return ok ? 0 : kExitError;
}

struct BapxArgs {
  std::string mechanism = "m1";
  std::string corpus;
  std::string cls = "arbitrary";
};

int cmd_bapx(const BapxArgs& a, const Output& out) {
  const auto corpus = io::load_corpus(a.corpus);
  if (corpus.empty()) throw ArgumentError("corpus " + a.corpus + " holds no instances");
  const WeightClass domain = io::weight_class_from(json(a.cls));
  bool unbounded = false;
  Rational worst = 1;
  std::size_t worst_at = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const BapxResult r = measure_bapx(io::mechanism_from_name(a.mechanism, domain, corpus[k].game()), {corpus[k]});
    if (r.unbounded) {
      if (!unbounded) worst_at = k;
      unbounded = true;
    } else if (!unbounded && r.ratio > worst) {
      worst = r.ratio;
      worst_at = k;
    }
  }
  const std::string ratio = unbounded ? "unbounded" : to_string(worst);
  emit(out, {{"mechanism", a.mechanism},
             {"instances", corpus.size()},
             {"ratio", ratio},
             {"worst_index", worst_at}});
  summary(out, {{"mechanism", a.mechanism}, {"instances", std::to_string(corpus.size())}, {"ratio", ratio}});
  return 0;
}

struct GenArgs {
  std::string cls = "arbitrary";
  std::string game = "ashg";
  int n = 3;
  std::uint64_t seed = 1;
  std::string eps = "1/10";
  std::string big = "100";
  std::string weights = "3,4,3";
  std::string x = "2";
  int agent = 1;
  std::string coalition = "1";
  std::string own;
  std::string dir;
  int count = 20;
  int n_max = 6;
};

int cmd_gen(const std::string& kind, const GenArgs& a, const Output& out) {
  const Game game = game_named(a.game);
  if (kind == "random") {
    const Instance inst = random_instance(io::weight_class_from(json(a.cls)), a.n, game, a.seed);
    emit(out, io::to_json(inst));
    summary(out, {{"generated", "random n=" + std::to_string(a.n)}, {"seed", std::to_string(a.seed)}});
    return 0;
  }
  if (kind == "fig1") {
    const auto [truth, lie] =
        fig1_family(parse_rational(a.eps), parse_rational(a.big), io::weight_class_from(json(a.cls)), game);
    emit(out, {{"truthful", io::to_json(truth)}, {"manipulated", io::to_json(lie)}});
    summary(out, {{"generated", "fig1 pair"}, {"epsilon", a.eps}});
    return 0;
  }
  if (kind == "chain") {
    emit(out, io::to_json(chain_instance(rationals(a.weights), game, io::weight_class_from(json(a.cls)))));
    summary(out, {{"generated", "chain " + a.weights}});
    return 0;
  }
  if (kind == "duplex-witness") {
    const Rational x = parse_rational(a.x);
    const DuplexWitness w = duplex_om_witness(a.n, x, a.agent - 1);
    const WeightClass cls = WeightClass::duplex(x);
    emit(out, {{"agent", a.agent},
               {"x", io::rational_json(x)},
               {"k", w.k},
               {"true_type", io::to_json(w.truth)},
               {"manipulation", io::to_json(w.manipulation)},
               {"others", io::to_json(w.others)},
               {"intended", io::to_json(w.intended)},
               {"truthful_utility", io::rational_json(w.truthful_utility)},
               {"instance", io::to_json(assemble(w.truth, w.others, cls, game))}});
    summary(out, {{"generated", "duplex witness"}, {"intended", str(w.intended)},
                  {"truthful u", to_string(w.truthful_utility)}});
    return 0;
  }
  if (kind == "forcing") {
    const WeightClass cls = io::weight_class_from(json(a.cls));
    Declaration own;
    if (!a.own.empty()) {
      own = Declaration{a.agent - 1, rationals(a.own)};
      if (static_cast<int>(own.values.size()) != a.n) throw ArgumentError("--own needs n values, own entry included");
    }
    const Instance inst = forcing_instance(a.n, a.agent - 1, coalition_csv(a.coalition, a.n), cls, own);
    emit(out, io::to_json(inst));
    summary(out, {{"generated", "forcing profile"}, {"target", a.coalition}});
    return 0;
  }
  if (kind == "corpus") {
    if (a.dir.empty()) throw ArgumentError("gen corpus needs --dir");
    const std::vector<WeightClass> classes = {WeightClass::arbitrary(), WeightClass::non_negative(),
                                              WeightClass::bounded(), WeightClass::duplex(2)};
    Rng rng(a.seed);
    std::vector<io::CorpusEntry> entries;
    for (int k = 0; k < a.count; ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "inst%04d.json", k);
      entries.push_back({name, classes[k % classes.size()], static_cast<int>(rng.uniform(2, a.n_max)),
                         k % 2 ? Game::FHG : Game::ASHG, rng.next()});
    }
    io::write_corpus(a.dir, entries);
    emit(out, {{"dir", a.dir}, {"instances", entries.size()}, {"verified", io::verify_corpus(a.dir)}});
    summary(out, {{"corpus", a.dir}, {"instances", std::to_string(entries.size())}});
    return 0;
  }
  throw ArgumentError("unknown generator '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver, mechanisms and manipulation auditor for hedonic games"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("-o,--out", out.path, "Write JSON here instead of stdout");
  app.add_flag("-q,--quiet", out.quiet, "Suppress the text summary on stderr");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Optimal partition under a tie policy");
  s->add_option("input", solve.input, "Instance JSON (default stdin)");
  s->add_option("--policy", solve.policy, "lexmin|split|largest|advgrand")->capture_default_str();

  RunArgs runa;
  auto* r = app.add_subcommand("run", "Run a mechanism on an instance");
  r->add_option("input", runa.input, "Instance JSON (default stdin)");
  r->add_option("-m,--mechanism", runa.mechanism, "opt:<policy>|m1|mech2|mech3|ex1|singletons, optional repr+ prefix")
      ->capture_default_str();

  std::string repr_input;
  auto* rp = app.add_subcommand("repr", "Representative of the instance's proportionality class");
  rp->add_option("input", repr_input, "Instance JSON (default stdin)");

  AuditArgs audit;
  auto* au = app.add_subcommand("audit", "Exhaustive NOM/SP audit or sampled SI audit");
  au->require_subcommand(1);
  for (const char* which : {"nom", "sp", "si"}) {
    auto* sub = au->add_subcommand(which, std::string(which) + " audit");
    sub->add_option("-m,--mechanism", audit.mechanism)->capture_default_str();
    sub->add_option("--game", audit.game, "ashg|fhg")->capture_default_str();
    if (std::string(which) == "si") {
      sub->add_option("--class", audit.cls, "Domain of the sampled instances")->capture_default_str();
      sub->add_option("--trials", audit.trials)->capture_default_str();
      sub->add_option("--seed", audit.seed)->capture_default_str();
    } else {
      sub->add_option("--space", audit.space, "duplex:x=3 | bounded:step=1/2 | grid:values=-4,-1,0,1")
          ->capture_default_str();
      sub->add_option("--n", audit.n)->capture_default_str();
      sub->add_option("--jobs", audit.jobs)->capture_default_str();
      sub->add_option("--budget", audit.budget, "Enumeration budget (default HF_BUDGET or 20000000)");
      sub->add_option("--agent", audit.agents, "Audit only these agents (1-based, repeatable)");
      sub->add_flag("--no-memo", audit.no_memo, "Disable flattened-graph memoization");
    }
  }

  std::string replay_input;
  auto* rpl = app.add_subcommand("replay", "Re-execute the witness of an audit report");
  rpl->add_option("report", replay_input, "Audit report JSON (default stdin)");

  BapxArgs bapx;
  auto* bench = app.add_subcommand("bench", "Benchmarks over a corpus");
  bench->require_subcommand(1);
  auto* bx = bench->add_subcommand("bapx", "Worst opt/SW ratio of a mechanism over a corpus");
  bx->add_option("-m,--mechanism", bapx.mechanism)->capture_default_str();
  bx->add_option("--corpus", bapx.corpus)->required();
  bx->add_option("--class", bapx.cls, "Mechanism domain")->capture_default_str();

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Instance generators");
  g->require_subcommand(1);
  auto* g_random = g->add_subcommand("random", "Seeded random instance");
  g_random->add_option("--class", gen.cls)->capture_default_str();
  g_random->add_option("--n", gen.n)->capture_default_str();
  g_random->add_option("--seed", gen.seed)->capture_default_str();
  g_random->add_option("--game", gen.game)->capture_default_str();
  auto* g_fig1 = g->add_subcommand("fig1", "Truthful and manipulated two-agent pair");
  g_fig1->add_option("--eps", gen.eps)->capture_default_str();
  g_fig1->add_option("--big", gen.big)->capture_default_str();
  g_fig1->add_option("--class", gen.cls)->capture_default_str();
  g_fig1->add_option("--game", gen.game)->capture_default_str();
  auto* g_chain = g->add_subcommand("chain", "Path instance with the given edge weights");
  g_chain->add_option("--weights", gen.weights)->capture_default_str();
  g_chain->add_option("--class", gen.cls)->capture_default_str();
  g_chain->add_option("--game", gen.game)->capture_default_str();
  auto* g_dw = g->add_subcommand("duplex-witness", "Obvious-manipulation witness for duplex x in (1, 2n-3)");
  g_dw->add_option("--n", gen.n)->capture_default_str();
  g_dw->add_option("--x", gen.x)->capture_default_str();
  g_dw->add_option("--agent", gen.agent)->capture_default_str();
  g_dw->add_option("--game", gen.game)->capture_default_str();
  auto* g_force = g->add_subcommand("forcing", "Profile that places an agent in a chosen coalition");
  g_force->add_option("--n", gen.n)->capture_default_str();
  g_force->add_option("--agent", gen.agent)->capture_default_str();
  g_force->add_option("--coalition", gen.coalition, "Comma-separated 1-based members")->capture_default_str();
  g_force->add_option("--own", gen.own, "The agent's own row, n comma-separated values");
  g_force->add_option("--class", gen.cls)->capture_default_str();
  auto* g_corpus = g->add_subcommand("corpus", "Seeded random corpus with manifest");
  g_corpus->add_option("--dir", gen.dir)->required();
  g_corpus->add_option("--count", gen.count)->capture_default_str();
  g_corpus->add_option("--n-max", gen.n_max)->capture_default_str();
  g_corpus->add_option("--seed", gen.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*s) return cmd_solve(solve, out);
    if (*r) return cmd_run(runa, out);
    if (*rp) return cmd_repr(repr_input, out);
    if (*au) {
      for (const char* which : {"nom", "sp", "si"})
        if (au->got_subcommand(which)) return cmd_audit(which, audit, out);
    }
    if (*rpl) return cmd_replay(replay_input, out);
    if (*bx) return cmd_bapx(bapx, out);
    if (*g) {
      for (auto* sub : g->get_subcommands())
        if (*sub) return cmd_gen(sub->get_name(), gen, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
