#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hedonic/canonical.hpp"
#include "hedonic/core.hpp"
#include "hedonic/matching.hpp"
#include "hedonic/solvers.hpp"

namespace hedonic {

/// A named deterministic map from declared instances to partitions.
class MechanismSpec {
 public:
  enum class Kind {
    Optimal,          // welfare optimum under a tie policy
    MatchingRepr,     // max-weight matching on the representative instance
    DuplexSplit,      // optimum; grand-vs-split ties go to the split (x = 2n-3)
    DuplexLargest,    // optimum maximizing the largest block (x = 1)
    AdversarialPair,  // two agents, zero pair sum: split iff d12 = -1
    Singletons,       // constant mechanism
  };

  static MechanismSpec optimal(TiePolicy policy, WeightClass domain, Game game = Game::ASHG) {
    return MechanismSpec(Kind::Optimal, policy, std::move(domain), game);
  }
  static MechanismSpec matching_repr(WeightClass domain, Game game = Game::ASHG) {
    return MechanismSpec(Kind::MatchingRepr, TiePolicy::LexMin, std::move(domain), game);
  }
  static MechanismSpec duplex_split(const Rational& x, Game game = Game::ASHG) {
    return MechanismSpec(Kind::DuplexSplit, TiePolicy::PreferSplitOfGrand, WeightClass::duplex(x), game);
  }
  static MechanismSpec duplex_largest(Game game = Game::ASHG) {
    return MechanismSpec(Kind::DuplexLargest, TiePolicy::PreferLargestBlock, WeightClass::duplex(1), game);
  }
  static MechanismSpec adversarial_pair(Game game = Game::ASHG) {
    return MechanismSpec(Kind::AdversarialPair, TiePolicy::LexMin, WeightClass::bounded(), game);
  }
  static MechanismSpec singletons(WeightClass domain, Game game = Game::ASHG) {
    return MechanismSpec(Kind::Singletons, TiePolicy::LexMin, std::move(domain), game);
  }

  /// The same mechanism applied to repr(input).
  MechanismSpec composed_with_repr() const {
    MechanismSpec out = *this;
    out.through_repr_ = true;
    return out;
  }

  Kind kind() const { return kind_; }
  TiePolicy policy() const { return policy_; }
  const WeightClass& domain() const { return domain_; }
  Game game() const { return game_; }
  bool through_repr() const { return through_repr_ || kind_ == Kind::MatchingRepr; }

  /// True when the output is a function of the flattened graph alone, so
  /// solver results may be memoized by flattened-graph key.
  bool depends_only_on_flattened() const { return kind_ != Kind::AdversarialPair || through_repr_; }

  /// Agent count forced by the mechanism's domain, if any.
  std::optional<int> fixed_n() const {
    if (kind_ == Kind::AdversarialPair) return 2;
    if (kind_ == Kind::DuplexSplit) {
      Rational n = (domain_.x() + 3) / 2;
      if (denominator_of(n) == 1) return numerator_of(n).convert_to<int>();
    }
    return std::nullopt;
  }

  std::string name() const {
    std::string base;
    switch (kind_) {
      case Kind::Optimal:
        base = std::string("opt:") + to_string(policy_);
        break;
      case Kind::MatchingRepr:
        return "m1";
      case Kind::DuplexSplit:
        base = "mech2";
        break;
      case Kind::DuplexLargest:
        base = "mech3";
        break;
      case Kind::AdversarialPair:
        base = "ex1";
        break;
      case Kind::Singletons:
        base = "singletons";
        break;
    }
    return through_repr_ ? "repr+" + base : base;
  }

  bool operator==(const MechanismSpec&) const = default;

 private:
  MechanismSpec(Kind k, TiePolicy p, WeightClass d, Game g) : kind_(k), policy_(p), domain_(std::move(d)), game_(g) {}

  Kind kind_;
  TiePolicy policy_;
  WeightClass domain_;
  Game game_;
  bool through_repr_ = false;
};

inline Partition partition_from_matching(int n, const Matching& m) {
  std::vector<Coalition> blocks;
  Coalition matched;
  for (auto [a, b] : m.edges) {
    blocks.push_back(Coalition::of({a, b}));
    matched = matched.with(a).with(b);
  }
  for (int v = 0; v < n; ++v)
    if (!matched.contains(v)) blocks.push_back(Coalition::singleton(v));
  return Partition(n, std::move(blocks));
}

namespace detail {

inline FlattenedGraph normalized(const FlattenedGraph& g) {
  Rational scale = g.max_abs();
  if (scale == 0 || scale == 1) return g;
  FlattenedGraph out(g.n());
  for (int a = 0; a < g.n(); ++a)
    for (int b = a + 1; b < g.n(); ++b) out.set(a, b, g.at(a, b) / scale);
  return out;
}

inline void check_domain(const MechanismSpec& spec, const Instance& inst) {
  if (inst.game() != spec.game())
    throw DomainError(std::string("mechanism ") + spec.name() + " expects game " + to_string(spec.game()));
  for (int i = 0; i < inst.n(); ++i)
    for (int j = 0; j < inst.n(); ++j)
      if (i != j && !spec.domain().admits(inst.weight(i, j)))
        throw DomainError("weight " + hedonic::to_string(inst.weight(i, j)) + " outside mechanism domain " +
                          spec.domain().describe());
  using Kind = MechanismSpec::Kind;
  if (spec.kind() == Kind::DuplexSplit && spec.domain().x() != 2 * inst.n() - 3)
    throw DomainError("mech2 requires x = 2n-3");
  if (spec.kind() == Kind::AdversarialPair && inst.n() != 2) throw DomainError("ex1 is defined for two agents only");
}

}  // namespace detail

/// Runs a flattened-graph mechanism directly on a graph (no domain checks).
inline Partition run_on_graph(const MechanismSpec& spec, const FlattenedGraph& graph) {
  using Kind = MechanismSpec::Kind;
  const FlattenedGraph g = spec.through_repr() ? detail::normalized(graph) : graph;
  switch (spec.kind()) {
    case Kind::Optimal:
      return optimal_partition(g, spec.game(), spec.policy());
    case Kind::DuplexSplit:
      return optimal_partition(g, spec.game(), TiePolicy::PreferSplitOfGrand);
    case Kind::DuplexLargest:
      return optimal_partition(g, spec.game(), TiePolicy::PreferLargestBlock);
    case Kind::MatchingRepr:
      return partition_from_matching(g.n(), max_weight_matching(g));
    case Kind::Singletons:
      return Partition::singletons(g.n());
    case Kind::AdversarialPair: {
      if (g.n() != 2) throw DomainError("ex1 is defined for two agents only");
      // only reachable through repr: the representative puts the sum on agent 1
      const Rational& s = g.at(0, 1);
      if (s > 0) return Partition::grand(2);
      if (s < 0) return Partition::singletons(2);
      return Partition::grand(2);
    }
  }
  throw ArgumentError("unknown mechanism kind");
}

inline Partition run(const MechanismSpec& spec, const Instance& inst) {
  detail::check_domain(spec, inst);
  if (spec.kind() == MechanismSpec::Kind::AdversarialPair && !spec.through_repr()) {
    const Rational& d12 = inst.weight(0, 1);
    const Rational s = d12 + inst.weight(1, 0);
    if (s > 0) return Partition::grand(2);
    if (s < 0) return Partition::singletons(2);
    return d12 == -1 ? Partition::singletons(2) : Partition::grand(2);
  }
  return run_on_graph(spec, flatten(inst));
}

/// Counterpart declarations that pin agent i's coalition to `target` in
/// every optimal partition. Arbitrary: flattened weight 1 inside the target,
/// -(n+1) elsewhere, realized around `own`. Duplex with x = 1: every other
/// agent declares 1 toward target members (when it is one) and -1 otherwise.
inline Profile forcing_profile(const Declaration& own, Coalition target, const WeightClass& cls) {
  const int n = static_cast<int>(own.values.size());
  const int i = own.agent;
  if (!target.contains(i)) throw ArgumentError("target coalition must contain the agent");
  if (!target.subset_of(Coalition::all(n))) throw ArgumentError("target coalition references unknown agents");
  Profile out;
  if (cls.kind() == WeightClass::Kind::Arbitrary) {
    const Rational big = n + 1;
    auto flat = [&](int a, int b) { return target.contains(a) && target.contains(b) ? Rational(1) : Rational(-big); };
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Declaration d{j, std::vector<Rational>(n)};
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        if (k == i) {
          d.values[k] = flat(i, j) - own.values[j];
        } else if (j < k) {
          d.values[k] = flat(j, k);  // lower index carries the whole pair sum
        }
      }
      out.push_back(std::move(d));
    }
    return out;
  }
  if (cls.kind() == WeightClass::Kind::GeneralDuplex && cls.x() == 1) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Declaration d{j, std::vector<Rational>(n)};
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        d.values[k] = target.contains(j) && target.contains(k) ? 1 : -1;
      }
      out.push_back(std::move(d));
    }
    return out;
  }
  throw DomainError("forcing profiles exist for arbitrary weights and duplex x=1 only, not " + cls.describe());
}

/// Open interval of duplex parameters for which k negative neighbors make
/// the grand coalition the unique optimum while leaving agent i negative.
struct DuplexInterval {
  int k;
  Rational lo;
  Rational hi;

  bool contains(const Rational& x) const { return lo < x && x < hi; }
};

inline std::vector<DuplexInterval> duplex_intervals(int n) {
  if (n < 3) throw ArgumentError("duplex intervals need n >= 3");
  std::vector<DuplexInterval> out;
  for (int k = 1; k <= n - 2; ++k)
    out.push_back({k, Rational(n - 1, k) - 1, Rational(2 * (n - 1), k) - 1});
  return out;
}

/// A truthful type whose worst case is negative, plus the all -x
/// declaration that guarantees a singleton.
struct DuplexWitness {
  Declaration truth;
  Declaration manipulation;
  Profile others;
  int k = 0;                 // negative neighbors of the truth; 0 for the x = n-2 construction
  Partition intended;        // the unique optimum under (truth, others)
  Rational truthful_utility;
};

inline DuplexWitness duplex_om_witness(int n, const Rational& x, int agent = 0) {
  if (n < 3) throw ConstructionError("duplex witness needs n >= 3");
  if (agent < 0 || agent >= n) throw ArgumentError("agent out of range");
  if (!(x > 1 && x < 2 * n - 3))
    throw ConstructionError("x=" + to_string(x) + " outside the open interval (1, " + std::to_string(2 * n - 3) + ")");
  const WeightClass cls = WeightClass::duplex(x);
  DuplexWitness w;
  w.truth = Declaration{agent, std::vector<Rational>(n)};
  w.manipulation = Declaration{agent, std::vector<Rational>(n)};
  for (int j = 0; j < n; ++j)
    if (j != agent) w.manipulation.values[j] = -x;

  std::vector<int> others_order;
  for (int j = 0; j < n; ++j)
    if (j != agent) others_order.push_back(j);

  if (x != n - 2) {
    int k = 0;
    for (const auto& iv : duplex_intervals(n))
      if (iv.contains(x)) {
        k = iv.k;
        break;
      }
    if (k == 0) throw ConstructionError("no interval contains x=" + to_string(x));
    w.k = k;
    for (std::size_t t = 0; t < others_order.size(); ++t)
      w.truth.values[others_order[t]] = static_cast<int>(t) < k ? Rational(-x) : Rational(1);
    for (int j : others_order) {
      Declaration d{j, std::vector<Rational>(n, Rational(1))};
      d.values[j] = 0;
      w.others.push_back(std::move(d));
    }
    w.intended = Partition::grand(n);
  } else {
    // coalition C of size max(3, ceil(3n/4)) holding the agent; j* is its last member
    const int size = std::max(3, (3 * n + 3) / 4);
    Coalition c = Coalition::singleton(agent);
    for (int j : others_order) {
      if (c.size() == size) break;
      c = c.with(j);
    }
    const auto members = c.members();
    const int j_star = members.back() == agent ? members[members.size() - 2] : members.back();
    for (int j : others_order)
      w.truth.values[j] = (c.contains(j) && j != j_star) ? Rational(1) : Rational(-x);
    for (int j : others_order) {
      Declaration d{j, std::vector<Rational>(n)};
      for (int t = 0; t < n; ++t) {
        if (t == j) continue;
        d.values[t] = (c.contains(j) && c.contains(t)) ? Rational(1) : Rational(-x);
      }
      w.others.push_back(std::move(d));
    }
    std::vector<Coalition> blocks{c};
    for (int j = 0; j < n; ++j)
      if (!c.contains(j)) blocks.push_back(Coalition::singleton(j));
    w.intended = Partition(n, blocks);
  }

  const Instance inst = assemble(w.truth, w.others, cls, Game::ASHG);
  if (count_optimal_partitions(inst) != 1 || optimal_partition(inst, TiePolicy::LexMin) != w.intended)
    throw ConstructionError("construction for n=" + std::to_string(n) + ", x=" + to_string(x) +
                            " does not have the intended unique optimum");
  w.truthful_utility = coalition_utility(inst, agent, w.intended.block_of(agent));
  if (w.truthful_utility >= 0)
    throw ConstructionError("construction for n=" + std::to_string(n) + ", x=" + to_string(x) +
                            " does not leave the agent with negative utility");
  return w;
}

/// Two-agent pair: agent 1 likes agent 2 (1), agent 2 mildly dislikes agent 1
/// (-epsilon) and can misreport -big. For Bounded weights big is clamped to 1.
inline std::pair<Instance, Instance> fig1_family(const Rational& epsilon, const Rational& big,
                                                 const WeightClass& cls = WeightClass::arbitrary(),
                                                 Game game = Game::ASHG) {
  if (!(epsilon > 0 && epsilon < 1)) throw ArgumentError("epsilon must lie in (0,1)");
  if (!(big > 1)) throw ArgumentError("big must exceed 1");
  Rational manip = cls.kind() == WeightClass::Kind::Bounded ? Rational(1) : big;
  Instance truth = Instance::from_rows({{0, 1}, {-epsilon, 0}}, cls, game);
  Instance lie = Instance::from_rows({{0, 1}, {-manip, 0}}, cls, game);
  return {std::move(truth), std::move(lie)};
}

}  // namespace hedonic
