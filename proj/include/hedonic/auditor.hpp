#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hedonic/canonical.hpp"
#include "hedonic/core.hpp"
#include "hedonic/mechanisms.hpp"
#include "hedonic/random.hpp"
#include "hedonic/solvers.hpp"

namespace hedonic {

/// Finite declaration grid shared by all agents. Each agent's space is the
/// full product of the per-edge values over the other n-1 agents.
class DeclarationSpace {
 public:
  enum class Kind { DuplexGrid, BoundedGrid, ValueGrid };

  static DeclarationSpace duplex_grid(int n, const Rational& x) {
    return DeclarationSpace(Kind::DuplexGrid, n, WeightClass::duplex(x), {-x, Rational(0), Rational(1)}, x);
  }

  /// {-1, -1+step, ..., 1}; step must divide 2.
  static DeclarationSpace bounded_grid(int n, const Rational& step) {
    if (step <= 0 || step > 2) throw ArgumentError("bounded grid step must lie in (0,2]");
    const Rational count = Rational(2) / step;
    if (denominator_of(count) != 1) throw ArgumentError("bounded grid step must divide 2");
    std::vector<Rational> values;
    for (Rational v = -1; v <= 1; v += step) values.push_back(v);
    return DeclarationSpace(Kind::BoundedGrid, n, WeightClass::bounded(), std::move(values), step);
  }

  /// Explicit value set (sorted and deduplicated), e.g. {-4,-1,0,1} over Arbitrary.
  static DeclarationSpace value_grid(int n, const WeightClass& cls, std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) throw ArgumentError("value grid needs at least one value");
    for (const auto& v : values)
      if (!cls.admits(v)) throw DomainError("grid value " + to_string(v) + " outside class " + cls.describe());
    return DeclarationSpace(Kind::ValueGrid, n, cls, std::move(values), Rational(0));
  }

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  const WeightClass& weight_class() const { return cls_; }
  const std::vector<Rational>& values() const { return values_; }
  int value_count() const { return static_cast<int>(values_.size()); }

  /// |D_i| = V^(n-1)
  std::uint64_t own_size() const { return power(n_ - 1); }
  /// |D_{-i}| = V^((n-1)^2)
  std::uint64_t counterpart_size() const { return power((n_ - 1) * (n_ - 1)); }

  /// Index of the value, or -1.
  int value_index(const Rational& v) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), v);
    return (it != values_.end() && *it == v) ? static_cast<int>(it - values_.begin()) : -1;
  }

  /// Own declaration number `idx` of `agent`: big-endian digits over the
  /// other agents in ascending order.
  Declaration declaration(int agent, std::uint64_t idx) const {
    check_agent(agent);
    if (idx >= own_size()) throw ArgumentError("declaration index out of range");
    Declaration d{agent, std::vector<Rational>(n_)};
    for (int j = n_ - 1; j >= 0; --j) {
      if (j == agent) continue;
      d.values[j] = values_[idx % values_.size()];
      idx /= values_.size();
    }
    return d;
  }

  std::uint64_t declaration_index(const Declaration& d) const {
    check_agent(d.agent);
    if (static_cast<int>(d.values.size()) != n_) throw ArgumentError("declaration length mismatch");
    std::uint64_t idx = 0;
    for (int j = 0; j < n_; ++j) {
      if (j == d.agent) continue;
      const int v = value_index(d.values[j]);
      if (v < 0) throw ArgumentError("declaration value " + to_string(d.values[j]) + " not in grid " + describe());
      idx = idx * values_.size() + v;
    }
    return idx;
  }

  /// Counterpart profile number `idx`: the other agents in ascending order,
  /// the first one most significant, each contributing own_size() digits.
  Profile counterpart(int agent, std::uint64_t idx) const {
    check_agent(agent);
    if (idx >= counterpart_size()) throw ArgumentError("counterpart index out of range");
    Profile out;
    const std::uint64_t own = own_size();
    std::vector<std::uint64_t> parts;
    for (int j = n_ - 1; j >= 0; --j) {
      if (j == agent) continue;
      parts.push_back(idx % own);
      idx /= own;
    }
    std::reverse(parts.begin(), parts.end());
    std::size_t t = 0;
    for (int j = 0; j < n_; ++j) {
      if (j == agent) continue;
      out.push_back(declaration(j, parts[t++]));
    }
    return out;
  }

  /// Value indices of the full profile into `idx` (row-major n*n, -1 on the diagonal).
  void fill_indices(int agent, std::uint64_t di, std::uint64_t dmi, std::vector<int>& idx) const {
    const std::size_t V = values_.size();
    idx.assign(static_cast<std::size_t>(n_) * n_, -1);
    auto fill_row = [&](int row, std::uint64_t code) {
      for (int j = n_ - 1; j >= 0; --j) {
        if (j == row) continue;
        idx[static_cast<std::size_t>(row) * n_ + j] = static_cast<int>(code % V);
        code /= V;
      }
    };
    fill_row(agent, di);
    const std::uint64_t own = own_size();
    for (int j = n_ - 1; j >= 0; --j) {
      if (j == agent) continue;
      fill_row(j, dmi % own);
      dmi /= own;
    }
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::DuplexGrid:
        return "duplex(x=" + to_string(param_) + ",n=" + std::to_string(n_) + ")";
      case Kind::BoundedGrid:
        return "bounded(step=" + to_string(param_) + ",n=" + std::to_string(n_) + ")";
      case Kind::ValueGrid: {
        std::string s = "grid(" + cls_.describe() + ",{";
        for (std::size_t k = 0; k < values_.size(); ++k) s += (k ? "," : "") + to_string(values_[k]);
        return s + "},n=" + std::to_string(n_) + ")";
      }
    }
    return "?";
  }

  /// Grid parameter: x for duplex, step for bounded, 0 for explicit grids.
  const Rational& parameter() const { return param_; }

 private:
  DeclarationSpace(Kind k, int n, WeightClass cls, std::vector<Rational> values, Rational param)
      : kind_(k), n_(n), cls_(std::move(cls)), values_(std::move(values)), param_(std::move(param)) {
    if (n_ < 1 || n_ > 8) throw ArgumentError("declaration spaces support 1 <= n <= 8");
    if (values_.size() > 255) throw ArgumentError("at most 255 grid values");
  }

  std::uint64_t power(int e) const {
    std::uint64_t r = 1;
    for (int k = 0; k < e; ++k) {
      if (r > std::numeric_limits<std::uint64_t>::max() / values_.size())
        throw CapacityError("declaration space size overflows 64 bits");
      r *= values_.size();
    }
    return r;
  }

  void check_agent(int agent) const {
    if (agent < 0 || agent >= n_) throw ArgumentError("agent out of range");
  }

  Kind kind_;
  int n_;
  WeightClass cls_;
  std::vector<Rational> values_;
  Rational param_;
};

inline constexpr std::uint64_t kDefaultBudget = 20'000'000;

/// Enumeration budget: HF_BUDGET if set, else kDefaultBudget.
inline std::uint64_t default_budget() {
  if (const char* env = std::getenv("HF_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

struct AuditOptions {
  int jobs = 1;
  std::uint64_t budget = default_budget();
  bool memoize = true;
  /// Agents to audit (0-based); empty means all.
  std::vector<int> agents;
};

enum class Condition { NomSup, NomInf, SP, SI, BAPX };

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::NomSup:
      return "NOM-sup";
    case Condition::NomInf:
      return "NOM-inf";
    case Condition::SP:
      return "SP";
    case Condition::SI:
      return "SI";
    case Condition::BAPX:
      return "BAPX";
  }
  return "?";
}

/// One run of the mechanism: counterpart profile, resulting partition and
/// the agent's utility under its true type.
struct Exhibit {
  Profile counterpart;
  Partition outcome;
  Rational utility;
};

struct ManipulationWitness {
  int agent = 0;
  Declaration true_type;
  Declaration manipulation;
  Condition condition = Condition::SP;
  Exhibit truthful;
  Exhibit manipulated;
};

struct ScaleWitness {
  Instance original;
  Instance scaled;
  Rational lambda;
  Partition original_outcome;
  Partition scaled_outcome;
};

using Witness = std::variant<ManipulationWitness, ScaleWitness>;

struct AuditStats {
  std::uint64_t profiles = 0;
  std::int64_t millis = 0;
};

enum class Verdict { Pass, Witness };

struct AuditReport {
  std::string audit;  // nom | sp | si
  std::string mechanism;
  std::string space;
  Verdict verdict = Verdict::Pass;
  std::optional<Witness> witness;
  AuditStats stats;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::Pass; }
};

/// Utility of a coalition under a declared row.
inline Rational declared_utility(const Declaration& d, Coalition c, Game game) {
  if (!c.contains(d.agent)) throw ArgumentError("coalition does not contain the agent");
  Rational s = 0;
  for (int j : c.members()) s += d.values[j];
  if (game == Game::FHG) s /= c.size();
  return s;
}

namespace detail {

/// Mechanism outputs keyed by flattened-graph encoding; sharded for
/// concurrent sweeps.
class MemoTable {
 public:
  std::optional<Coalition> find_block(const std::string& key, int agent) {
    Shard& s = shard(key);
    std::lock_guard<std::mutex> lock(s.m);
    auto it = s.map.find(key);
    if (it == s.map.end()) return std::nullopt;
    return it->second.block_of(agent);
  }

  std::optional<Partition> find(const std::string& key) {
    Shard& s = shard(key);
    std::lock_guard<std::mutex> lock(s.m);
    auto it = s.map.find(key);
    if (it == s.map.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const Partition& p) {
    Shard& s = shard(key);
    std::lock_guard<std::mutex> lock(s.m);
    s.map.insert_or_assign(key, p);
  }

 private:
  struct Shard {
    std::mutex m;
    std::unordered_map<std::string, Partition> map;
  };
  Shard& shard(const std::string& key) { return shards_[std::hash<std::string>{}(key) % shards_.size()]; }

  std::array<Shard, 32> shards_;
};

/// Evaluates the mechanism on grid profiles given as value indices.
class GridEvaluator {
 public:
  GridEvaluator(const MechanismSpec& spec, const DeclarationSpace& space, bool memoize)
      : spec_(spec), space_(space), memoize_(memoize && spec.depends_only_on_flattened()) {
    for (const auto& v : space.values())
      if (!spec.domain().admits(v))
        throw DomainError("grid value " + to_string(v) + " outside mechanism domain " + spec.domain().describe());
    const int V = space.value_count();
    // identical pair sums share an id so equal flattened graphs share a key
    std::map<Rational, int> ids;
    sum_id_.resize(static_cast<std::size_t>(V) * V);
    for (int a = 0; a < V; ++a)
      for (int b = 0; b < V; ++b) {
        const Rational s = space.values()[a] + space.values()[b];
        auto [it, fresh] = ids.emplace(s, static_cast<int>(ids.size()));
        sum_id_[static_cast<std::size_t>(a) * V + b] = it->second;
      }
    sum_values_.resize(ids.size());
    for (const auto& [s, id] : ids) sum_values_[id] = s;
    if (sum_values_.size() > 255) memoize_ = false;
  }

  bool memoized() const { return memoize_; }

  Instance instance(const std::vector<int>& idx) const {
    const int n = space_.n();
    std::vector<Rational> w(static_cast<std::size_t>(n) * n);
    for (std::size_t k = 0; k < w.size(); ++k)
      if (idx[k] >= 0) w[k] = space_.values()[idx[k]];
    return Instance(n, std::move(w), spec_.domain(), spec_.game());
  }

  Partition outcome(const std::vector<int>& idx) {
    if (!memoize_) return run(spec_, instance(idx));
    const std::string key = encode(idx);
    if (auto hit = memo_.find(key)) return *hit;
    Partition p = run_on_graph(spec_, graph(idx));
    memo_.put(key, p);
    return p;
  }

  Coalition block(const std::vector<int>& idx, int agent) {
    if (!memoize_) return run(spec_, instance(idx)).block_of(agent);
    const std::string key = encode(idx);
    if (auto hit = memo_.find_block(key, agent)) return *hit;
    Partition p = run_on_graph(spec_, graph(idx));
    memo_.put(key, p);
    return p.block_of(agent);
  }

 private:
  std::string encode(const std::vector<int>& idx) const {
    const int n = space_.n();
    const int V = space_.value_count();
    std::string key;
    key.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        key.push_back(static_cast<char>(
            sum_id_[static_cast<std::size_t>(idx[static_cast<std::size_t>(a) * n + b]) * V +
                    idx[static_cast<std::size_t>(b) * n + a]]));
    return key;
  }

  FlattenedGraph graph(const std::vector<int>& idx) const {
    const int n = space_.n();
    const int V = space_.value_count();
    FlattenedGraph g(n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        g.set(a, b,
              sum_values_[sum_id_[static_cast<std::size_t>(idx[static_cast<std::size_t>(a) * n + b]) * V +
                                  idx[static_cast<std::size_t>(b) * n + a]]]);
    return g;
  }

  const MechanismSpec& spec_;
  const DeclarationSpace& space_;
  bool memoize_;
  std::vector<int> sum_id_;
  std::vector<Rational> sum_values_;
  MemoTable memo_;
};

/// Runs body(begin, end) over [0, count) split into `jobs` contiguous chunks.
inline void parallel_chunks(std::uint64_t count, int jobs, const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (jobs <= 1 || count < 2) {
    body(0, count);
    return;
  }
  const std::uint64_t k = std::min<std::uint64_t>(static_cast<std::uint64_t>(jobs), count);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(k);
  for (std::uint64_t t = 0; t < k; ++t) {
    const std::uint64_t b = count * t / k;
    const std::uint64_t e = count * (t + 1) / k;
    workers.emplace_back([&, t, b, e] {
      try {
        body(b, e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// coalition[dmi * |D_i| + di] = agent's block under (d_i, d_{-i}), as a bitmask.
inline std::vector<std::uint32_t> coalition_table(GridEvaluator& ev, const DeclarationSpace& space, int agent,
                                                  int jobs) {
  const std::uint64_t di_count = space.own_size();
  const std::uint64_t dmi_count = space.counterpart_size();
  std::vector<std::uint32_t> table(di_count * dmi_count);
  parallel_chunks(dmi_count, jobs, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<int> idx;
    for (std::uint64_t dmi = begin; dmi < end; ++dmi)
      for (std::uint64_t di = 0; di < di_count; ++di) {
        space.fill_indices(agent, di, dmi, idx);
        table[dmi * di_count + di] = ev.block(idx, agent).bits();
      }
  });
  return table;
}

inline std::vector<int> audited_agents(const DeclarationSpace& space, const AuditOptions& opt) {
  std::vector<int> agents;
  if (opt.agents.empty()) {
    for (int i = 0; i < space.n(); ++i) agents.push_back(i);
  } else {
    for (int i : opt.agents) {
      if (i < 0 || i >= space.n()) throw ArgumentError("audited agent out of range");
      agents.push_back(i);
    }
    std::sort(agents.begin(), agents.end());
    agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  }
  return agents;
}

inline void check_space(const MechanismSpec& spec, const DeclarationSpace& space) {
  if (auto fixed = spec.fixed_n(); fixed && *fixed != space.n())
    throw DomainError("mechanism " + spec.name() + " is defined for n=" + std::to_string(*fixed) + " only");
  // exercises the mechanism's own domain checks once
  std::vector<int> idx;
  space.fill_indices(0, 0, 0, idx);
  GridEvaluator probe(spec, space, false);
  (void)probe.outcome(idx);
}

inline Exhibit make_exhibit(const MechanismSpec& spec, const DeclarationSpace& space, const Declaration& truth,
                            const Declaration& declared, std::uint64_t dmi) {
  Exhibit ex;
  ex.counterpart = space.counterpart(truth.agent, dmi);
  ex.outcome = run(spec, assemble(declared, ex.counterpart, spec.domain(), spec.game()));
  ex.utility = declared_utility(truth, ex.outcome.block_of(truth.agent), spec.game());
  return ex;
}

inline std::int64_t millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

inline const char* kGridPassNote =
    "pass is relative to the finite declaration grid; suprema and infima are taken as grid maxima and minima";
inline const char* kSpWitnessNote = "a fixed counterpart profile with a profitable misreport; this holds outside the grid too";

// A duplex grid is the whole duplex domain. Elsewhere the counterparts are
// confined to the grid, which can shift either extreme.
inline const char* nom_witness_note(const DeclarationSpace& space) {
  return space.kind() == DeclarationSpace::Kind::DuplexGrid
             ? "the grid is the full duplex domain, so this is an obvious manipulation of the mechanism itself"
             : "obvious manipulation when every declaration is confined to this grid; wider counterpart values may "
               "move the extremes";
}

}  // namespace detail

/// Coalitions agent `d_i.agent` can end up in over every counterpart profile
/// of the grid, in lexicographic order.
inline std::vector<Coalition> coal_set(const MechanismSpec& spec, const Declaration& d_i, const DeclarationSpace& space,
                                       const AuditOptions& opt = {}) {
  const int agent = d_i.agent;
  const std::uint64_t di = space.declaration_index(d_i);
  if (space.counterpart_size() > opt.budget)
    throw CapacityError("coal_set sweep of " + std::to_string(space.counterpart_size()) + " profiles exceeds budget " +
                        std::to_string(opt.budget));
  detail::check_space(spec, space);
  detail::GridEvaluator ev(spec, space, opt.memoize);
  std::set<std::uint32_t> all;
  std::mutex m;
  detail::parallel_chunks(space.counterpart_size(), opt.jobs, [&](std::uint64_t b, std::uint64_t e) {
    std::set<std::uint32_t> local;
    std::vector<int> idx;
    for (std::uint64_t dmi = b; dmi < e; ++dmi) {
      space.fill_indices(agent, di, dmi, idx);
      local.insert(ev.block(idx, agent).bits());
    }
    std::lock_guard<std::mutex> lock(m);
    all.insert(local.begin(), local.end());
  });
  std::vector<Coalition> out;
  for (std::uint32_t c : all) out.emplace_back(c);
  std::sort(out.begin(), out.end(), [](Coalition a, Coalition b) { return lex_less(a, b); });
  return out;
}

/// Coalitions over an explicit list of counterpart profiles.
inline std::vector<Coalition> coal_set(const MechanismSpec& spec, const Declaration& d_i,
                                       const std::vector<Profile>& profiles) {
  std::vector<Coalition> out;
  for (const auto& others : profiles) {
    const Coalition c = run(spec, assemble(d_i, others, spec.domain(), spec.game())).block_of(d_i.agent);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](Coalition a, Coalition b) { return lex_less(a, b); });
  return out;
}

/// Partitions reachable over every counterpart profile, sorted.
inline std::vector<Partition> out_set(const MechanismSpec& spec, const Declaration& d_i, const DeclarationSpace& space,
                                      const AuditOptions& opt = {}) {
  const int agent = d_i.agent;
  const std::uint64_t di = space.declaration_index(d_i);
  if (space.counterpart_size() > opt.budget)
    throw CapacityError("out_set sweep of " + std::to_string(space.counterpart_size()) + " profiles exceeds budget " +
                        std::to_string(opt.budget));
  detail::check_space(spec, space);
  detail::GridEvaluator ev(spec, space, opt.memoize);
  std::set<Partition> all;
  std::mutex m;
  detail::parallel_chunks(space.counterpart_size(), opt.jobs, [&](std::uint64_t b, std::uint64_t e) {
    std::set<Partition> local;
    std::vector<int> idx;
    for (std::uint64_t dmi = b; dmi < e; ++dmi) {
      space.fill_indices(agent, di, dmi, idx);
      local.insert(ev.outcome(idx));
    }
    std::lock_guard<std::mutex> lock(m);
    all.insert(local.begin(), local.end());
  });
  return {all.begin(), all.end()};
}

/// Checks both NOM conditions for every agent, true type and manipulation;
/// reports the first violation in (agent, true type, manipulation) order,
/// sup before inf.
inline AuditReport audit_nom(const MechanismSpec& spec, const DeclarationSpace& space, const AuditOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  AuditReport report{"nom", spec.name(), space.describe(), Verdict::Pass, std::nullopt, {}, {}};
  const std::uint64_t Di = space.own_size();
  const std::uint64_t Dmi = space.counterpart_size();
  if (Di * Di > opt.budget || Di * Di * Dmi > opt.budget)
    throw CapacityError("NOM audit needs |D_i|^2 * |D_-i| = " + std::to_string(Di) + "^2 * " + std::to_string(Dmi) +
                        " evaluations, over budget " + std::to_string(opt.budget));
  detail::check_space(spec, space);
  detail::GridEvaluator ev(spec, space, opt.memoize);
  const int n = space.n();
  const std::size_t masks = std::size_t{1} << n;

  for (int agent : detail::audited_agents(space, opt)) {
    const auto table = detail::coalition_table(ev, space, agent, opt.jobs);
    report.stats.profiles += Di * Dmi;

    // reachable coalitions per own declaration, with the first profile reaching each
    constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> first(Di * masks, kNone);
    for (std::uint64_t dmi = 0; dmi < Dmi; ++dmi)
      for (std::uint64_t di = 0; di < Di; ++di) {
        std::uint64_t& f = first[di * masks + table[dmi * Di + di]];
        if (f == kNone) f = dmi;
      }
    std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> reach(Di);
    for (std::uint64_t di = 0; di < Di; ++di) {
      for (std::uint32_t c = 0; c < masks; ++c)
        if (first[di * masks + c] != kNone) reach[di].emplace_back(first[di * masks + c], c);
      std::sort(reach[di].begin(), reach[di].end());
    }

    struct Extremes {
      Rational sup, inf;
      std::uint64_t sup_dmi = 0, inf_dmi = 0;
    };
    std::vector<Rational> util(masks);
    std::vector<Extremes> ext(Di);
    for (std::uint64_t w = 0; w < Di; ++w) {
      const Declaration truth = space.declaration(agent, w);
      for (std::uint32_t c = 0; c < masks; ++c)
        if (Coalition(c).contains(agent)) util[c] = declared_utility(truth, Coalition(c), spec.game());
      for (std::uint64_t d = 0; d < Di; ++d) {
        Extremes& e = ext[d];
        bool have = false;
        for (const auto& [dmi, c] : reach[d]) {
          const Rational& u = util[c];
          if (!have || u > e.sup) e.sup = u, e.sup_dmi = dmi;
          if (!have || u < e.inf) e.inf = u, e.inf_dmi = dmi;
          have = true;
        }
      }
      const Extremes& t = ext[w];
      for (std::uint64_t d = 0; d < Di; ++d) {
        if (d == w) continue;
        const Extremes& m = ext[d];
        std::optional<Condition> broken;
        std::uint64_t t_dmi = 0, m_dmi = 0;
        if (t.sup < m.sup) {
          broken = Condition::NomSup;
          t_dmi = t.sup_dmi;
          m_dmi = m.sup_dmi;
        } else if (t.inf < m.inf) {
          broken = Condition::NomInf;
          t_dmi = t.inf_dmi;
          m_dmi = m.inf_dmi;
        }
        if (!broken) continue;
        ManipulationWitness mw;
        mw.agent = agent;
        mw.true_type = truth;
        mw.manipulation = space.declaration(agent, d);
        mw.condition = *broken;
        mw.truthful = detail::make_exhibit(spec, space, truth, truth, t_dmi);
        mw.manipulated = detail::make_exhibit(spec, space, truth, mw.manipulation, m_dmi);
        report.verdict = Verdict::Witness;
        report.witness = std::move(mw);
        report.notes.push_back(detail::nom_witness_note(space));
        report.stats.millis = detail::millis_since(start);
        return report;
      }
    }
  }
  report.notes.push_back(detail::kGridPassNote);
  report.stats.millis = detail::millis_since(start);
  return report;
}

/// First (agent, true type, counterpart profile, manipulation) where the
/// manipulation strictly beats truth-telling.
inline AuditReport audit_sp(const MechanismSpec& spec, const DeclarationSpace& space, const AuditOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  AuditReport report{"sp", spec.name(), space.describe(), Verdict::Pass, std::nullopt, {}, {}};
  const std::uint64_t Di = space.own_size();
  const std::uint64_t Dmi = space.counterpart_size();
  if (Di * Di > opt.budget || Di * Di * Dmi > opt.budget)
    throw CapacityError("SP audit needs |D_i|^2 * |D_-i| = " + std::to_string(Di) + "^2 * " + std::to_string(Dmi) +
                        " comparisons, over budget " + std::to_string(opt.budget));
  detail::check_space(spec, space);
  detail::GridEvaluator ev(spec, space, opt.memoize);
  const int n = space.n();
  const std::size_t masks = std::size_t{1} << n;

  for (int agent : detail::audited_agents(space, opt)) {
    const auto table = detail::coalition_table(ev, space, agent, opt.jobs);
    report.stats.profiles += Di * Dmi;
    std::vector<int> rank(masks);
    for (std::uint64_t w = 0; w < Di; ++w) {
      const Declaration truth = space.declaration(agent, w);
      // integer ranks of the agent's utilities under w
      std::vector<std::pair<Rational, std::uint32_t>> us;
      for (std::uint32_t c = 0; c < masks; ++c)
        if (Coalition(c).contains(agent)) us.emplace_back(declared_utility(truth, Coalition(c), spec.game()), c);
      std::sort(us.begin(), us.end());
      int r = 0;
      for (std::size_t k = 0; k < us.size(); ++k) {
        if (k > 0 && us[k].first != us[k - 1].first) ++r;
        rank[us[k].second] = r;
      }
      for (std::uint64_t dmi = 0; dmi < Dmi; ++dmi) {
        const std::uint32_t* row = &table[dmi * Di];
        const int truthful = rank[row[w]];
        for (std::uint64_t d = 0; d < Di; ++d) {
          if (d == w || rank[row[d]] <= truthful) continue;
          ManipulationWitness mw;
          mw.agent = agent;
          mw.true_type = truth;
          mw.manipulation = space.declaration(agent, d);
          mw.condition = Condition::SP;
          mw.truthful = detail::make_exhibit(spec, space, truth, truth, dmi);
          mw.manipulated = detail::make_exhibit(spec, space, truth, mw.manipulation, dmi);
          report.verdict = Verdict::Witness;
          report.witness = std::move(mw);
          report.notes.push_back(detail::kSpWitnessNote);
          report.stats.millis = detail::millis_since(start);
          return report;
        }
      }
    }
  }
  report.notes.push_back(detail::kGridPassNote);
  report.stats.millis = detail::millis_since(start);
  return report;
}

/// Runs the mechanism on a proportional pair; a witness when the outputs differ.
inline std::optional<ScaleWitness> si_check(const MechanismSpec& spec, const Instance& a, const Instance& b) {
  auto lambda = is_proportional(b, a);
  if (!lambda) throw ArgumentError("instances are not proportional");
  Partition pa = run(spec, a);
  Partition pb = run(spec, b);
  if (pa == pb) return std::nullopt;
  return ScaleWitness{a, b, lambda->lambda, std::move(pa), std::move(pb)};
}

/// Sampled scale-independence check over seeded random proportional pairs.
inline AuditReport audit_si(const MechanismSpec& spec, int trials = 200, std::uint64_t seed = 1) {
  const auto start = std::chrono::steady_clock::now();
  AuditReport report{"si", spec.name(), "random(trials=" + std::to_string(trials) + ",seed=" + std::to_string(seed) + ")",
                     Verdict::Pass, std::nullopt, {}, {}};
  Rng rng(seed);
  const auto fixed = spec.fixed_n();
  for (int t = 0; t < trials; ++t) {
    const int n = fixed ? *fixed : static_cast<int>(rng.uniform(2, 6));
    const Instance a = random_instance(spec.domain(), n, spec.game(), rng);
    const Instance b = random_proportional(a, rng);
    report.stats.profiles += 2;
    if (auto w = si_check(spec, a, b)) {
      report.verdict = Verdict::Witness;
      report.witness = std::move(*w);
      report.stats.millis = detail::millis_since(start);
      return report;
    }
  }
  report.notes.push_back("pass is relative to the sampled proportional pairs");
  report.stats.millis = detail::millis_since(start);
  return report;
}

/// Re-executes a witness from its recorded exhibits; true when every
/// recorded outcome and utility is reproduced and the violation holds.
inline bool replay(const MechanismSpec& spec, const Witness& witness) {
  if (const auto* sw = std::get_if<ScaleWitness>(&witness)) {
    auto lambda = is_proportional(sw->scaled, sw->original);
    if (!lambda || lambda->lambda != sw->lambda) return false;
    return run(spec, sw->original) == sw->original_outcome && run(spec, sw->scaled) == sw->scaled_outcome &&
           sw->original_outcome != sw->scaled_outcome;
  }
  const auto& mw = std::get<ManipulationWitness>(witness);
  auto check = [&](const Declaration& declared, const Exhibit& ex) {
    const Partition p = run(spec, assemble(declared, ex.counterpart, spec.domain(), spec.game()));
    return p == ex.outcome && declared_utility(mw.true_type, p.block_of(mw.agent), spec.game()) == ex.utility;
  };
  if (mw.true_type.agent != mw.agent || mw.manipulation.agent != mw.agent) return false;
  if (mw.condition == Condition::SP && mw.truthful.counterpart != mw.manipulated.counterpart) return false;
  return check(mw.true_type, mw.truthful) && check(mw.manipulation, mw.manipulated) &&
         mw.truthful.utility < mw.manipulated.utility;
}

/// Worst observed opt / SW(M) ratio over a corpus; 0/0 counts as 1.
struct BapxResult {
  bool unbounded = false;
  Rational ratio = 1;
  std::size_t worst = 0;  // corpus index attaining the ratio
};

inline BapxResult measure_bapx(const MechanismSpec& spec, const std::vector<Instance>& corpus) {
  BapxResult out;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const Instance& inst = corpus[k];
    const Rational opt = optimal_value(inst);
    const Rational sw = social_welfare(inst, run(spec, inst));
    if (opt == sw) continue;
    if (sw <= 0) {
      if (!out.unbounded) out.worst = k;
      out.unbounded = true;
      continue;
    }
    const Rational r = opt / sw;
    if (!out.unbounded && r > out.ratio) {
      out.ratio = r;
      out.worst = k;
    }
  }
  return out;
}

}  // namespace hedonic
