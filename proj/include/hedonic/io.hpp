#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedonic/auditor.hpp"
#include "hedonic/core.hpp"
#include "hedonic/mechanisms.hpp"
#include "hedonic/random.hpp"

// External formats use 1-based agent indices; everything internal is 0-based.
namespace hedonic::io {

using json = nlohmann::ordered_json;

inline std::string rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_from(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return from_double(j.get<double>());
  throw ParseError("expected a rational (string or number)");
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline json to_json(Game g) { return to_string(g); }

inline Game game_from(const json& j) {
  std::string s = j.get<std::string>();
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "ashg") return Game::ASHG;
  if (s == "fhg") return Game::FHG;
  throw ParseError("unknown game '" + s + "'");
}

inline json to_json(const WeightClass& c) {
  switch (c.kind()) {
    case WeightClass::Kind::Arbitrary:
      return {{"kind", "arbitrary"}};
    case WeightClass::Kind::NonNegative:
      return {{"kind", "nonnegative"}};
    case WeightClass::Kind::Bounded:
      return {{"kind", "bounded"}};
    case WeightClass::Kind::GeneralDuplex:
      return {{"kind", "duplex"}, {"x", rational_json(c.x())}};
  }
  return {};
}

/// Accepts {"kind":..,"x":..} objects and the short forms "arbitrary",
/// "nonnegative", "bounded", "duplex:x=3".
inline WeightClass weight_class_from(const json& j) {
  std::string kind;
  std::optional<Rational> x;
  if (j.is_string()) {
    kind = j.get<std::string>();
    if (kind.rfind("duplex:x=", 0) == 0) {
      x = parse_rational(kind.substr(9));
      kind = "duplex";
    }
  } else {
    kind = field(j, "kind").get<std::string>();
    if (j.contains("x")) x = rational_from(j.at("x"));
  }
  if (kind == "arbitrary") return WeightClass::arbitrary();
  if (kind == "nonnegative") return WeightClass::non_negative();
  if (kind == "bounded") return WeightClass::bounded();
  if (kind == "duplex") {
    if (!x) throw ParseError("duplex class needs x");
    return WeightClass::duplex(*x);
  }
  throw ParseError("unknown weight class '" + kind + "'");
}

inline json to_json(const Instance& inst) {
  json rows = json::array();
  for (int i = 0; i < inst.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < inst.n(); ++j) row.push_back(rational_json(inst.weight(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"game", to_json(inst.game())}, {"class", to_json(inst.weight_class())}, {"n", inst.n()}, {"weights", rows}};
}

inline Instance instance_from(const json& j) {
  const int n = field(j, "n").get<int>();
  const json& rows = field(j, "weights");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw ParseError("weights must have n rows");
  std::vector<std::vector<Rational>> w;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw ParseError("weights must have n columns");
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(rational_from(v));
    w.push_back(std::move(r));
  }
  const Game game = j.contains("game") ? game_from(j.at("game")) : Game::ASHG;
  return Instance::from_rows(w, weight_class_from(field(j, "class")), game);
}

inline json to_json(Coalition c) {
  json out = json::array();
  for (int m : c.members()) out.push_back(m + 1);
  return out;
}

inline Coalition coalition_from(const json& j, int n) {
  if (!j.is_array()) throw ParseError("coalition must be an array of agents");
  Coalition c;
  for (const auto& a : j) {
    const int v = a.get<int>();
    if (v < 1 || v > n) throw ParseError("agent " + std::to_string(v) + " out of range 1.." + std::to_string(n));
    c = c.with(v - 1);
  }
  return c;
}

inline json to_json(const Partition& p) {
  json out = json::array();
  for (Coalition b : p.blocks()) out.push_back(to_json(b));
  return out;
}

inline Partition partition_from(const json& j, int n) {
  if (!j.is_array()) throw ParseError("partition must be an array of coalitions");
  std::vector<Coalition> blocks;
  for (const auto& b : j) blocks.push_back(coalition_from(b, n));
  return Partition(n, std::move(blocks));
}

inline json to_json(const Declaration& d) {
  json values = json::array();
  for (const auto& v : d.values) values.push_back(rational_json(v));
  return {{"agent", d.agent + 1}, {"values", values}};
}

inline Declaration declaration_from(const json& j) {
  Declaration d;
  d.agent = field(j, "agent").get<int>() - 1;
  for (const auto& v : field(j, "values")) d.values.push_back(rational_from(v));
  if (d.agent < 0 || d.agent >= static_cast<int>(d.values.size())) throw ParseError("declaration agent out of range");
  return d;
}

inline json to_json(const Profile& p) {
  json out = json::array();
  for (const auto& d : p) out.push_back(to_json(d));
  return out;
}

inline Profile profile_from(const json& j) {
  Profile p;
  for (const auto& d : j) p.push_back(declaration_from(d));
  return p;
}

// ---- mechanisms -----------------------------------------------------------

/// Mechanism by CLI name. `domain` is used by the domain-agnostic mechanisms;
/// mech2/mech3/ex1 fix their own domain (mech2 takes x from a duplex domain).
inline MechanismSpec mechanism_from_name(const std::string& raw, const WeightClass& domain, Game game) {
  std::string name = raw;
  bool through_repr = false;
  if (name.rfind("repr+", 0) == 0) {
    through_repr = true;
    name = name.substr(5);
  }
  auto finish = [&](MechanismSpec m) { return through_repr ? m.composed_with_repr() : m; };
  if (name.rfind("opt:", 0) == 0) {
    const std::string p = name.substr(4);
    for (TiePolicy policy : kAllTiePolicies)
      if (p == to_string(policy)) return finish(MechanismSpec::optimal(policy, domain, game));
    throw ParseError("unknown tie policy '" + p + "'");
  }
  if (name == "opt") return finish(MechanismSpec::optimal(TiePolicy::LexMin, domain, game));
  if (name == "m1") {
    if (through_repr) throw ParseError("m1 already composes with repr");
    return MechanismSpec::matching_repr(domain, game);
  }
  if (name == "mech2") {
    if (domain.kind() != WeightClass::Kind::GeneralDuplex) throw DomainError("mech2 needs a duplex domain");
    return finish(MechanismSpec::duplex_split(domain.x(), game));
  }
  if (name == "mech3") return finish(MechanismSpec::duplex_largest(game));
  if (name == "ex1") return finish(MechanismSpec::adversarial_pair(game));
  if (name == "singletons") return finish(MechanismSpec::singletons(domain, game));
  throw ParseError("unknown mechanism '" + raw + "'");
}

inline json to_json(const MechanismSpec& m) {
  return {{"name", m.name()}, {"domain", to_json(m.domain())}, {"game", to_json(m.game())}};
}

inline MechanismSpec mechanism_from(const json& j) {
  return mechanism_from_name(field(j, "name").get<std::string>(), weight_class_from(field(j, "domain")),
                             game_from(field(j, "game")));
}

// ---- declaration spaces ---------------------------------------------------

/// "duplex:x=3", "bounded:step=1/2", "grid:values=-4,-1,0,1" or
/// "grid:class=nonnegative;values=0,1".
inline DeclarationSpace space_from_string(const std::string& text, int n) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("space parameter '" + item + "' lacks '='");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("space '" + text + "' needs " + key + "=");
    return it->second;
  };
  if (kind == "duplex") return DeclarationSpace::duplex_grid(n, parse_rational(need("x")));
  if (kind == "bounded") return DeclarationSpace::bounded_grid(n, parse_rational(need("step")));
  if (kind == "grid") {
    std::vector<Rational> values;
    std::stringstream ss(need("values"));
    std::string v;
    while (std::getline(ss, v, ',')) values.push_back(parse_rational(v));
    const WeightClass cls = kv.count("class") ? weight_class_from(json(kv["class"])) : WeightClass::arbitrary();
    return DeclarationSpace::value_grid(n, cls, std::move(values));
  }
  throw ParseError("unknown space kind '" + kind + "'");
}

// ---- reports and witnesses ------------------------------------------------

inline json to_json(const Exhibit& e) {
  return {{"counterpart", to_json(e.counterpart)}, {"outcome", to_json(e.outcome)}, {"utility", rational_json(e.utility)}};
}

inline Exhibit exhibit_from(const json& j, int n) {
  return Exhibit{profile_from(field(j, "counterpart")), partition_from(field(j, "outcome"), n),
                 rational_from(field(j, "utility"))};
}

inline json to_json(const Witness& w) {
  if (const auto* mw = std::get_if<ManipulationWitness>(&w)) {
    return {{"type", "manipulation"},
            {"condition", to_string(mw->condition)},
            {"agent", mw->agent + 1},
            {"true_type", to_json(mw->true_type)},
            {"manipulation", to_json(mw->manipulation)},
            {"truthful", to_json(mw->truthful)},
            {"manipulated", to_json(mw->manipulated)}};
  }
  const auto& sw = std::get<ScaleWitness>(w);
  return {{"type", "scale"},
          {"condition", "SI"},
          {"lambda", rational_json(sw.lambda)},
          {"original", to_json(sw.original)},
          {"scaled", to_json(sw.scaled)},
          {"original_outcome", to_json(sw.original_outcome)},
          {"scaled_outcome", to_json(sw.scaled_outcome)}};
}

inline Condition condition_from(const std::string& s) {
  for (Condition c : {Condition::NomSup, Condition::NomInf, Condition::SP, Condition::SI, Condition::BAPX})
    if (s == to_string(c)) return c;
  throw ParseError("unknown condition '" + s + "'");
}

inline Witness witness_from(const json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "manipulation") {
    ManipulationWitness mw;
    mw.agent = field(j, "agent").get<int>() - 1;
    mw.condition = condition_from(field(j, "condition").get<std::string>());
    mw.true_type = declaration_from(field(j, "true_type"));
    mw.manipulation = declaration_from(field(j, "manipulation"));
    const int n = static_cast<int>(mw.true_type.values.size());
    mw.truthful = exhibit_from(field(j, "truthful"), n);
    mw.manipulated = exhibit_from(field(j, "manipulated"), n);
    return mw;
  }
  if (type == "scale") {
    Instance a = instance_from(field(j, "original"));
    Instance b = instance_from(field(j, "scaled"));
    const int n = a.n();
    return ScaleWitness{std::move(a), std::move(b), rational_from(field(j, "lambda")),
                        partition_from(field(j, "original_outcome"), n), partition_from(field(j, "scaled_outcome"), n)};
  }
  throw ParseError("unknown witness type '" + type + "'");
}

inline json to_json(const AuditReport& r, const MechanismSpec& spec) {
  json out = {{"audit", r.audit},
              {"mechanism", to_json(spec)},
              {"space", r.space},
              {"verdict", r.passed() ? "pass" : "witness"}};
  if (r.witness) out["witness"] = to_json(*r.witness);
  out["stats"] = {{"profiles", r.stats.profiles}, {"millis", r.stats.millis}};
  out["notes"] = r.notes;
  return out;
}

// ---- files and corpora ----------------------------------------------------

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

/// One seeded random instance of a corpus.
struct CorpusEntry {
  std::string file;
  WeightClass cls = WeightClass::arbitrary();
  int n = 2;
  Game game = Game::ASHG;
  std::uint64_t seed = 0;

  Instance generate() const { return random_instance(cls, n, game, seed); }
};

inline json to_json(const CorpusEntry& e) {
  return {{"file", e.file},
          {"generator", "random"},
          {"class", to_json(e.cls)},
          {"n", e.n},
          {"game", to_json(e.game)},
          {"seed", e.seed}};
}

inline CorpusEntry corpus_entry_from(const json& j) {
  if (field(j, "generator").get<std::string>() != "random") throw ParseError("unsupported corpus generator");
  return CorpusEntry{field(j, "file").get<std::string>(), weight_class_from(field(j, "class")),
                     field(j, "n").get<int>(), game_from(field(j, "game")), field(j, "seed").get<std::uint64_t>()};
}

/// Writes every entry's instance plus manifest.json into `dir`.
inline void write_corpus(const std::filesystem::path& dir, const std::vector<CorpusEntry>& entries) {
  std::filesystem::create_directories(dir);
  json manifest = {{"entries", json::array()}};
  for (const auto& e : entries) {
    write_json_file(dir / e.file, to_json(e.generate()));
    manifest["entries"].push_back(to_json(e));
  }
  write_json_file(dir / "manifest.json", manifest);
}

inline std::vector<CorpusEntry> read_manifest(const std::filesystem::path& dir) {
  std::vector<CorpusEntry> out;
  const json manifest = read_json_file(dir / "manifest.json");
  for (const auto& e : field(manifest, "entries")) out.push_back(corpus_entry_from(e));
  return out;
}

/// Loads the corpus files listed in the manifest, or every *.json file when
/// there is no manifest.
inline std::vector<Instance> load_corpus(const std::filesystem::path& dir) {
  std::vector<Instance> out;
  if (std::filesystem::exists(dir / "manifest.json")) {
    for (const auto& e : read_manifest(dir)) out.push_back(instance_from(read_json_file(dir / e.file)));
    return out;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(dir))
    if (f.path().extension() == ".json") files.push_back(f.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back(instance_from(read_json_file(f)));
  return out;
}

/// True when every manifest entry regenerates its file exactly.
inline bool verify_corpus(const std::filesystem::path& dir) {
  for (const auto& e : read_manifest(dir))
    if (!(instance_from(read_json_file(dir / e.file)) == e.generate())) return false;
  return true;
}

}  // namespace hedonic::io
