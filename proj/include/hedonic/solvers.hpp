#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hedonic/core.hpp"

namespace hedonic {

enum class TiePolicy { LexMin, PreferSplitOfGrand, PreferLargestBlock, AdversarialGrand };

inline const char* to_string(TiePolicy p) {
  switch (p) {
    case TiePolicy::LexMin:
      return "lexmin";
    case TiePolicy::PreferSplitOfGrand:
      return "split";
    case TiePolicy::PreferLargestBlock:
      return "largest";
    case TiePolicy::AdversarialGrand:
      return "advgrand";
  }
  return "?";
}

inline constexpr TiePolicy kAllTiePolicies[] = {TiePolicy::LexMin, TiePolicy::PreferSplitOfGrand,
                                                TiePolicy::PreferLargestBlock, TiePolicy::AdversarialGrand};

inline constexpr int kDefaultDpCap = 16;

/// Welfare contributed by coalition c: internal flattened weight, divided by |c| for FHG.
inline Rational coalition_value(const FlattenedGraph& g, Game game, Coalition c) {
  if (c.empty()) throw ArgumentError("coalition must be nonempty");
  const auto members = c.members();
  Rational s = 0;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) s += g.at(members[a], members[b]);
  if (game == Game::FHG) s /= c.size();
  return s;
}

inline Rational coalition_value(const Instance& inst, Coalition c) {
  return coalition_value(flatten(inst), inst.game(), c);
}

/// Subset DP over bitmasks. best[S] is the optimum welfare of partitions of S;
/// the first block of every partition of S contains min(S).
class WelfareDp {
 public:
  WelfareDp(const FlattenedGraph& g, Game game, int cap = kDefaultDpCap) : n_(g.n()) {
    if (n_ < 1) throw ArgumentError("need at least one agent");
    if (n_ > cap) throw CapacityError("welfare DP for n=" + std::to_string(n_) + " exceeds cap " + std::to_string(cap));
    const std::uint32_t full = Coalition::all(n_).bits();
    const std::size_t size = std::size_t{1} << n_;

    // internal flattened weight, extended one agent at a time
    std::vector<Rational> internal(size);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      int low = std::countr_zero(mask);
      std::uint32_t rest = mask & (mask - 1);
      Rational s = internal[rest];
      for (std::uint32_t b = rest; b; b &= b - 1) s += g.at(low, std::countr_zero(b));
      internal[mask] = std::move(s);
    }
    value_.resize(size);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      value_[mask] = internal[mask];
      if (game == Game::FHG) value_[mask] /= std::popcount(mask);
    }

    best_.assign(size, Rational(0));
    largest_.assign(size, 0);
    count_.assign(size, 0);
    count_[0] = 1;
    for (std::uint32_t s = 1; s <= full; ++s) {
      const std::uint32_t low = s & (~s + 1);
      const std::uint32_t others = s ^ low;
      bool first = true;
      // every c = low | sub with sub a submask of others
      for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
        const std::uint32_t c = low | sub;
        Rational v = value_[c] + best_[s ^ c];
        const int big = std::max(std::popcount(c), largest_[s ^ c]);
        if (first || v > best_[s]) {
          best_[s] = std::move(v);
          largest_[s] = big;
          count_[s] = count_[s ^ c];
          first = false;
        } else if (v == best_[s]) {
          largest_[s] = std::max(largest_[s], big);
          count_[s] += count_[s ^ c];
        }
        if (sub == 0) break;
      }
    }
  }

  int n() const { return n_; }
  const Rational& optimum() const { return best_[Coalition::all(n_).bits()]; }
  const Rational& value(Coalition c) const { return value_[c.bits()]; }
  std::uint64_t optimal_count() const { return count_[Coalition::all(n_).bits()]; }
  int max_largest_block() const { return largest_[Coalition::all(n_).bits()]; }

  /// Lexicographically smallest optimal partition; when `need_block` is
  /// positive, restricted to optimal partitions having a block of that size.
  Partition lexmin(int need_block = 0) const {
    std::vector<Coalition> blocks;
    std::uint32_t s = Coalition::all(n_).bits();
    int need = need_block;
    while (s) {
      const std::uint32_t low = s & (~s + 1);
      const std::uint32_t others = s ^ low;
      bool have = false;
      Coalition chosen;
      for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
        const std::uint32_t c = low | sub;
        if (value_[c] + best_[s ^ c] == best_[s]) {
          const int size = std::popcount(c);
          const bool ok = need == 0 || size == need || largest_[s ^ c] >= need;
          if (ok && (!have || lex_less(Coalition(c), chosen))) {
            chosen = Coalition(c);
            have = true;
          }
        }
        if (sub == 0) break;
      }
      if (!have) throw Error("welfare DP extraction found no optimal block");
      if (chosen.size() == need) need = 0;
      blocks.push_back(chosen);
      s ^= chosen.bits();
    }
    return Partition(n_, std::move(blocks));
  }

 private:
  int n_;
  std::vector<Rational> value_;
  std::vector<Rational> best_;
  std::vector<int> largest_;
  std::vector<std::uint64_t> count_;
};

inline Rational optimal_value(const Instance& inst, int cap = kDefaultDpCap) {
  return WelfareDp(flatten(inst), inst.game(), cap).optimum();
}

/// Number of distinct optimal partitions.
inline std::uint64_t count_optimal_partitions(const Instance& inst, int cap = kDefaultDpCap) {
  return WelfareDp(flatten(inst), inst.game(), cap).optimal_count();
}

inline Partition optimal_partition(const FlattenedGraph& g, Game game, TiePolicy policy, int cap = kDefaultDpCap) {
  const WelfareDp dp(g, game, cap);
  const int n = g.n();
  switch (policy) {
    case TiePolicy::LexMin:
      return dp.lexmin();
    case TiePolicy::PreferLargestBlock:
      return dp.lexmin(dp.max_largest_block());
    case TiePolicy::PreferSplitOfGrand:
    case TiePolicy::AdversarialGrand: {
      const Coalition all = Coalition::all(n);
      if (n >= 2 && dp.value(all) == dp.optimum()) {
        for (int j = 0; j < n; ++j) {
          if (dp.value(all.without(j)) == dp.optimum()) {
            if (policy == TiePolicy::AdversarialGrand) return Partition::grand(n);
            return Partition(n, {all.without(j), Coalition::singleton(j)});
          }
        }
      }
      return dp.lexmin();
    }
  }
  throw ArgumentError("unknown tie policy");
}

inline Partition optimal_partition(const Instance& inst, TiePolicy policy, int cap = kDefaultDpCap) {
  return optimal_partition(flatten(inst), inst.game(), policy, cap);
}

/// Every welfare-maximizing partition, by full enumeration (oracle).
inline std::vector<Partition> all_optimal_partitions(const Instance& inst, int cap = kDefaultOracleCap) {
  if (inst.n() > cap)
    throw CapacityError("optimal-set enumeration for n=" + std::to_string(inst.n()) + " exceeds cap");
  const FlattenedGraph g = flatten(inst);
  std::vector<Rational> block_value(std::size_t{1} << inst.n());
  for (std::uint32_t mask = 1; mask < block_value.size(); ++mask)
    block_value[mask] = coalition_value(g, inst.game(), Coalition(mask));

  std::vector<Partition> best;
  Rational best_sw;
  for_each_partition(
      inst.n(),
      [&](const Partition& p) {
        Rational sw = 0;
        for (Coalition b : p.blocks()) sw += block_value[b.bits()];
        if (best.empty() || sw > best_sw) {
          best.clear();
          best_sw = sw;
          best.push_back(p);
        } else if (sw == best_sw) {
          best.push_back(p);
        }
      },
      cap);
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace hedonic
