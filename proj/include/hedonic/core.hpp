#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hedonic/errors.hpp"
#include "hedonic/rational.hpp"

namespace hedonic {

enum class Game { ASHG, FHG };

inline const char* to_string(Game g) { return g == Game::ASHG ? "ashg" : "fhg"; }

/// Admissible per-edge declared values.
class WeightClass {
 public:
  enum class Kind { Arbitrary, NonNegative, Bounded, GeneralDuplex };

  static WeightClass arbitrary() { return WeightClass(Kind::Arbitrary, 0); }
  static WeightClass non_negative() { return WeightClass(Kind::NonNegative, 0); }
  static WeightClass bounded() { return WeightClass(Kind::Bounded, 0); }
  static WeightClass duplex(const Rational& x) {
    if (x <= 0) throw DomainError("duplex parameter x must be positive, got " + hedonic::to_string(x));
    return WeightClass(Kind::GeneralDuplex, x);
  }

  Kind kind() const { return kind_; }
  /// Only meaningful for GeneralDuplex.
  const Rational& x() const { return x_; }

  bool admits(const Rational& w) const {
    switch (kind_) {
      case Kind::Arbitrary:
        return true;
      case Kind::NonNegative:
        return w >= 0;
      case Kind::Bounded:
        return w >= -1 && w <= 1;
      case Kind::GeneralDuplex:
        return w == 0 || w == 1 || w == -x_;
    }
    return false;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::Arbitrary:
        return "arbitrary";
      case Kind::NonNegative:
        return "nonnegative";
      case Kind::Bounded:
        return "bounded";
      case Kind::GeneralDuplex:
        return "duplex(x=" + hedonic::to_string(x_) + ")";
    }
    return "?";
  }

  friend bool operator==(const WeightClass& a, const WeightClass& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::GeneralDuplex || a.x_ == b.x_);
  }

 private:
  WeightClass(Kind k, Rational x) : kind_(k), x_(std::move(x)) {}
  Kind kind_;
  Rational x_;
};

/// Agents in a bitmask; indices are 0-based internally.
inline constexpr int kMaxPartitionAgents = 32;

class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t bits) : bits_(bits) {}

  static Coalition of(std::initializer_list<int> agents) {
    Coalition c;
    for (int a : agents) c = c.with(a);
    return c;
  }
  static Coalition from_members(std::span<const int> agents) {
    Coalition c;
    for (int a : agents) c = c.with(a);
    return c;
  }
  static constexpr Coalition singleton(int agent) { return Coalition(std::uint32_t{1} << agent); }
  static constexpr Coalition all(int n) {
    return Coalition(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool contains(int agent) const { return (bits_ >> agent) & 1U; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int min_agent() const { return std::countr_zero(bits_); }
  constexpr Coalition with(int agent) const {
    if (agent < 0 || agent >= kMaxPartitionAgents) throw ArgumentError("agent index out of range");
    return Coalition(bits_ | (std::uint32_t{1} << agent));
  }
  constexpr Coalition without(int agent) const { return Coalition(bits_ & ~(std::uint32_t{1} << agent)); }
  constexpr bool disjoint(Coalition o) const { return (bits_ & o.bits_) == 0; }
  constexpr bool subset_of(Coalition o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr Coalition operator|(Coalition a, Coalition b) { return Coalition(a.bits_ | b.bits_); }
  friend constexpr Coalition operator&(Coalition a, Coalition b) { return Coalition(a.bits_ & b.bits_); }
  friend constexpr Coalition operator-(Coalition a, Coalition b) { return Coalition(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(Coalition a, Coalition b) = default;

  /// Lexicographic order of the ascending member lists ({1} < {1,2} < {1,3} < {2}).
  friend constexpr bool lex_less(Coalition a, Coalition b) {
    std::uint32_t diff = a.bits_ ^ b.bits_;
    if (diff == 0) return false;
    int d = std::countr_zero(diff);
    std::uint32_t at_or_above = ~((std::uint32_t{1} << d) - 1);
    if (a.contains(d)) return (b.bits_ & at_or_above) != 0;
    return (a.bits_ & at_or_above) == 0;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int m : members()) {
      if (!first) s += ",";
      s += std::to_string(m + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint32_t bits_ = 0;
};

/// Disjoint coalitions covering {0..n-1}, stored in canonical order
/// (blocks sorted by minimum agent).
class Partition {
 public:
  Partition() = default;

  Partition(int n, std::vector<Coalition> blocks) : n_(n), blocks_(std::move(blocks)) {
    if (n < 1 || n > kMaxPartitionAgents) throw StructuralError("partition size out of range");
    Coalition seen;
    for (Coalition b : blocks_) {
      if (b.empty()) throw StructuralError("partition contains an empty block");
      if (!b.disjoint(seen)) throw StructuralError("partition blocks overlap");
      seen = seen | b;
    }
    if (seen != Coalition::all(n)) throw StructuralError("partition does not cover all agents");
    std::sort(blocks_.begin(), blocks_.end(),
              [](Coalition a, Coalition b) { return a.min_agent() < b.min_agent(); });
  }

  /// From a label per agent (agents sharing a label share a block).
  static Partition from_labels(std::span<const int> labels) {
    int n = static_cast<int>(labels.size());
    std::vector<Coalition> blocks;
    std::vector<int> label_ids;
    for (int a = 0; a < n; ++a) {
      auto it = std::find(label_ids.begin(), label_ids.end(), labels[a]);
      if (it == label_ids.end()) {
        label_ids.push_back(labels[a]);
        blocks.push_back(Coalition::singleton(a));
      } else {
        auto k = static_cast<std::size_t>(it - label_ids.begin());
        blocks[k] = blocks[k].with(a);
      }
    }
    return Partition(n, std::move(blocks));
  }

  static Partition grand(int n) { return Partition(n, {Coalition::all(n)}); }
  static Partition singletons(int n) {
    std::vector<Coalition> blocks;
    for (int a = 0; a < n; ++a) blocks.push_back(Coalition::singleton(a));
    return Partition(n, std::move(blocks));
  }

  int n() const { return n_; }
  const std::vector<Coalition>& blocks() const { return blocks_; }

  Coalition block_of(int agent) const {
    for (Coalition b : blocks_)
      if (b.contains(agent)) return b;
    throw StructuralError("agent " + std::to_string(agent + 1) + " not in partition");
  }

  int largest_block() const {
    int best = 0;
    for (Coalition b : blocks_) best = std::max(best, b.size());
    return best;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_ == b.n_ && a.blocks_ == b.blocks_;
  }

  /// Lexicographic order of the canonical encoding.
  friend bool operator<(const Partition& a, const Partition& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    std::size_t k = std::min(a.blocks_.size(), b.blocks_.size());
    for (std::size_t i = 0; i < k; ++i) {
      if (a.blocks_[i] == b.blocks_[i]) continue;
      return lex_less(a.blocks_[i], b.blocks_[i]);
    }
    return a.blocks_.size() < b.blocks_.size();
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i) s += ",";
      s += blocks_[i].str();
    }
    return s + "}";
  }

 private:
  int n_ = 0;
  std::vector<Coalition> blocks_;
};

/// Row of declared values for one agent; values[agent] is always zero.
struct Declaration {
  int agent = 0;
  std::vector<Rational> values;

  friend bool operator==(const Declaration&, const Declaration&) = default;
};

/// Declarations of every agent other than the one being examined, in agent order.
using Profile = std::vector<Declaration>;

class Instance {
 public:
  Instance(int n, std::vector<Rational> weights, WeightClass cls, Game game)
      : n_(n), weights_(std::move(weights)), cls_(std::move(cls)), game_(game) {
    if (n < 1) throw ArgumentError("instance needs at least one agent");
    if (weights_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
      throw ArgumentError("weight matrix must be n x n");
    for (int i = 0; i < n; ++i) {
      if (weight(i, i) != 0) throw DomainError("self weight of agent " + std::to_string(i + 1) + " must be 0");
      for (int j = 0; j < n; ++j) {
        if (i != j && !cls_.admits(weight(i, j)))
          throw DomainError("weight w(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")=" +
                            hedonic::to_string(weight(i, j)) + " outside class " + cls_.describe());
      }
    }
  }

  static Instance from_rows(const std::vector<std::vector<Rational>>& rows, WeightClass cls, Game game) {
    int n = static_cast<int>(rows.size());
    std::vector<Rational> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw ArgumentError("weight matrix must be square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Instance(n, std::move(flat), std::move(cls), game);
  }

  /// All-zero instance.
  static Instance zeros(int n, WeightClass cls, Game game) {
    return Instance(n, std::vector<Rational>(static_cast<std::size_t>(n) * n), std::move(cls), game);
  }

  int n() const { return n_; }
  Game game() const { return game_; }
  const WeightClass& weight_class() const { return cls_; }
  const Rational& weight(int i, int j) const { return weights_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<Rational>& weights() const { return weights_; }

  Declaration declaration(int agent) const {
    Declaration d{agent, {}};
    d.values.assign(weights_.begin() + static_cast<std::ptrdiff_t>(agent) * n_,
                    weights_.begin() + static_cast<std::ptrdiff_t>(agent + 1) * n_);
    return d;
  }

  /// Copy with the row of `d.agent` replaced.
  Instance with_declaration(const Declaration& d) const {
    check_declaration(d);
    std::vector<Rational> w = weights_;
    std::copy(d.values.begin(), d.values.end(), w.begin() + static_cast<std::ptrdiff_t>(d.agent) * n_);
    return Instance(n_, std::move(w), cls_, game_);
  }

  Instance with_game(Game g) const { return Instance(n_, weights_, cls_, g); }
  Instance with_class(WeightClass c) const { return Instance(n_, weights_, std::move(c), game_); }

  Instance scaled(const Rational& lambda) const {
    std::vector<Rational> w = weights_;
    for (auto& v : w) v *= lambda;
    return Instance(n_, std::move(w), cls_, game_);
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.game_ == b.game_ && a.cls_ == b.cls_ && a.weights_ == b.weights_;
  }

  void check_declaration(const Declaration& d) const {
    if (d.agent < 0 || d.agent >= n_) throw ArgumentError("declaration agent out of range");
    if (d.values.size() != static_cast<std::size_t>(n_)) throw ArgumentError("declaration length must be n");
  }

 private:
  int n_;
  std::vector<Rational> weights_;
  WeightClass cls_;
  Game game_;
};

/// Builds the instance (d_i, others). `others` must hold one declaration per agent != d_i.agent.
inline Instance assemble(const Declaration& own, const Profile& others, WeightClass cls, Game game) {
  int n = static_cast<int>(own.values.size());
  if (others.size() + 1 != static_cast<std::size_t>(n)) throw ArgumentError("profile must cover every other agent");
  std::vector<Rational> w(static_cast<std::size_t>(n) * n);
  auto put = [&](const Declaration& d) {
    if (d.values.size() != static_cast<std::size_t>(n)) throw ArgumentError("declaration length must be n");
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(d.agent) * n + j] = d.values[j];
  };
  put(own);
  for (const auto& d : others) {
    if (d.agent == own.agent) throw ArgumentError("profile repeats the examined agent");
    put(d);
  }
  return Instance(n, std::move(w), std::move(cls), game);
}

/// Undirected graph of mutual sums.
class FlattenedGraph {
 public:
  explicit FlattenedGraph(int n) : n_(n), w_(static_cast<std::size_t>(n) * n) {}

  int n() const { return n_; }
  const Rational& at(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, const Rational& v) {
    if (i == j) throw ArgumentError("flattened graph has no self loops");
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ArgumentError("flattened graph index out of range");
    w_[static_cast<std::size_t>(i) * n_ + j] = v;
    w_[static_cast<std::size_t>(j) * n_ + i] = v;
  }
  bool is_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](const Rational& v) { return v == 0; });
  }
  Rational max_abs() const {
    Rational m = 0;
    for (const auto& v : w_) m = std::max(m, hedonic::abs(v));
    return m;
  }

  friend bool operator==(const FlattenedGraph&, const FlattenedGraph&) = default;

 private:
  int n_;
  std::vector<Rational> w_;
};

inline FlattenedGraph flatten(const Instance& inst) {
  FlattenedGraph g(inst.n());
  for (int i = 0; i < inst.n(); ++i)
    for (int j = i + 1; j < inst.n(); ++j) g.set(i, j, inst.weight(i, j) + inst.weight(j, i));
  return g;
}

namespace detail {
inline void check_partition(const Instance& inst, const Partition& pi) {
  if (pi.n() != inst.n()) throw StructuralError("partition size does not match instance");
}
}  // namespace detail

/// Sum of w_ij over j in C (agent i must be in C).
inline Rational coalition_sum(const Instance& inst, int i, Coalition c) {
  Rational s = 0;
  for (int j : c.members()) s += inst.weight(i, j);
  return s;
}

inline Rational ashg_utility(const Instance& inst, const Partition& pi, int i) {
  detail::check_partition(inst, pi);
  return coalition_sum(inst, i, pi.block_of(i));
}

inline Rational fhg_utility(const Instance& inst, const Partition& pi, int i) {
  detail::check_partition(inst, pi);
  Coalition c = pi.block_of(i);
  return coalition_sum(inst, i, c) / c.size();
}

/// Utility of agent i for coalition c under the given game and weights.
inline Rational coalition_utility(const Instance& inst, int i, Coalition c) {
  Rational s = coalition_sum(inst, i, c);
  if (inst.game() == Game::FHG) s /= c.size();
  return s;
}

inline Rational utility(const Instance& inst, const Partition& pi, int i) {
  return inst.game() == Game::ASHG ? ashg_utility(inst, pi, i) : fhg_utility(inst, pi, i);
}

inline Rational social_welfare(const Instance& inst, const Partition& pi) {
  detail::check_partition(inst, pi);
  Rational sw = 0;
  for (int i = 0; i < inst.n(); ++i) sw += utility(inst, pi, i);
  return sw;
}

inline Rational cut_value(const FlattenedGraph& g, Coalition a, Coalition b) {
  if (a.empty() || b.empty()) throw ArgumentError("cut sides must be nonempty");
  if (!a.disjoint(b)) throw ArgumentError("cut sides must be disjoint");
  Rational s = 0;
  for (int x : a.members())
    for (int y : b.members()) {
      if (x >= g.n() || y >= g.n()) throw ArgumentError("cut side references agent outside the graph");
      s += g.at(x, y);
    }
  return s;
}

struct Neighbors {
  std::vector<int> positive;
  std::vector<int> negative;
};

inline Neighbors neighbors(const Instance& inst, int i) {
  Neighbors out;
  for (int j = 0; j < inst.n(); ++j) {
    if (j == i) continue;
    if (inst.weight(i, j) > 0) out.positive.push_back(j);
    if (inst.weight(i, j) < 0) out.negative.push_back(j);
  }
  return out;
}

inline constexpr int kDefaultOracleCap = 10;

/// Visits every set partition of n agents once, in restricted-growth-string order
/// (the grand coalition first, all singletons last).
inline void for_each_partition(int n, const std::function<void(const Partition&)>& visit,
                               int cap = kDefaultOracleCap) {
  if (n < 1) throw ArgumentError("need at least one agent");
  if (n > cap) throw CapacityError("partition enumeration for n=" + std::to_string(n) + " exceeds cap " +
                                   std::to_string(cap));
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);
  while (true) {
    visit(Partition::from_labels(rgs));
    int k = n - 1;
    while (k > 0 && rgs[k] > prefix_max[k - 1]) --k;
    if (k == 0) return;
    ++rgs[k];
    prefix_max[k] = std::max(prefix_max[k - 1], rgs[k]);
    for (int t = k + 1; t < n; ++t) {
      rgs[t] = 0;
      prefix_max[t] = prefix_max[k];
    }
  }
}

inline std::vector<Partition> enumerate_partitions(int n, int cap = kDefaultOracleCap) {
  std::vector<Partition> out;
  for_each_partition(n, [&](const Partition& p) { out.push_back(p); }, cap);
  return out;
}

}  // namespace hedonic
