#pragma once

#include <cstdint>
#include <vector>

#include "hedonic/core.hpp"

namespace hedonic {

/// SplitMix64. Fixed algorithm so seeded corpora are reproducible on every
/// platform (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw ArgumentError("empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return lo + static_cast<std::int64_t>(r % span);
  }

  bool coin() { return (next() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

/// Quarter-step grids keep ties (zero pair sums, equal welfare) frequent.
inline Rational random_weight(const WeightClass& cls, Rng& rng) {
  switch (cls.kind()) {
    case WeightClass::Kind::Arbitrary:
      return Rational(rng.uniform(-12, 12), 4);
    case WeightClass::Kind::NonNegative:
      return Rational(rng.uniform(0, 12), 4);
    case WeightClass::Kind::Bounded:
      return Rational(rng.uniform(-4, 4), 4);
    case WeightClass::Kind::GeneralDuplex: {
      switch (rng.uniform(0, 2)) {
        case 0:
          return -cls.x();
        case 1:
          return Rational(0);
        default:
          return Rational(1);
      }
    }
  }
  return Rational(0);
}

inline Instance random_instance(const WeightClass& cls, int n, Game game, Rng& rng) {
  std::vector<Rational> w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) w[static_cast<std::size_t>(i) * n + j] = random_weight(cls, rng);
  return Instance(n, std::move(w), cls, game);
}

inline Instance random_instance(const WeightClass& cls, int n, Game game, std::uint64_t seed) {
  Rng rng(seed);
  return random_instance(cls, n, game, rng);
}

/// A random instance proportional to `inst` inside the same weight class:
/// pair sums scaled by a random lambda, optionally re-split between the two
/// directions. General duplex classes only admit lambda = 1 with swapped
/// directions.
inline Instance random_proportional(const Instance& inst, Rng& rng, Rational* lambda_out = nullptr) {
  const int n = inst.n();
  const WeightClass& cls = inst.weight_class();
  std::vector<Rational> w(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> Rational& { return w[static_cast<std::size_t>(i) * n + j]; };
  Rational lambda = 1;

  if (cls.kind() == WeightClass::Kind::GeneralDuplex) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const bool swap = rng.coin();
        at(i, j) = swap ? inst.weight(j, i) : inst.weight(i, j);
        at(j, i) = swap ? inst.weight(i, j) : inst.weight(j, i);
      }
  } else {
    lambda = Rational(rng.uniform(1, 8), rng.uniform(1, 8));
    if (cls.kind() == WeightClass::Kind::Bounded) {
      Rational m = 0;
      for (const auto& v : inst.weights()) m = std::max(m, hedonic::abs(v));
      if (m > 0 && lambda * m > 1) lambda = 1 / m;
    }
    const bool resplit = rng.coin();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!resplit) {
          at(i, j) = lambda * inst.weight(i, j);
          at(j, i) = lambda * inst.weight(j, i);
          continue;
        }
        const Rational s = lambda * (inst.weight(i, j) + inst.weight(j, i));
        Rational first;
        switch (cls.kind()) {
          case WeightClass::Kind::Arbitrary:
            first = Rational(rng.uniform(-12, 12), 4);
            break;
          case WeightClass::Kind::NonNegative:
            first = s * Rational(rng.uniform(0, 4), 4);
            break;
          default: {
            // Bounded: both parts within [-1,1]
            const Rational lo = std::max(Rational(-1), s - 1);
            const Rational hi = std::min(Rational(1), s + 1);
            first = lo + (hi - lo) * Rational(rng.uniform(0, 4), 4);
            break;
          }
        }
        at(i, j) = first;
        at(j, i) = s - first;
      }
  }
  if (lambda_out) *lambda_out = lambda;
  return Instance(n, std::move(w), cls, inst.game());
}

}  // namespace hedonic
