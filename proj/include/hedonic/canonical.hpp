#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hedonic/core.hpp"

namespace hedonic {

/// g = lambda * h.
struct ProportionalityWitness {
  Rational lambda;
};

inline std::optional<ProportionalityWitness> is_proportional(const FlattenedGraph& g, const FlattenedGraph& h) {
  if (g.n() != h.n()) throw ArgumentError("proportionality requires graphs of equal size");
  const bool g_zero = g.is_zero();
  const bool h_zero = h.is_zero();
  if (g_zero && h_zero) return ProportionalityWitness{Rational(1)};
  if (g_zero || h_zero) return std::nullopt;

  std::optional<Rational> lambda;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = i + 1; j < g.n(); ++j) {
      const Rational& a = g.at(i, j);
      const Rational& b = h.at(i, j);
      if (b == 0) {
        if (a != 0) return std::nullopt;
        continue;
      }
      if (!lambda) {
        lambda = a / b;
        if (*lambda <= 0) return std::nullopt;
      } else if (a != *lambda * b) {
        return std::nullopt;
      }
    }
  }
  return ProportionalityWitness{*lambda};
}

inline std::optional<ProportionalityWitness> is_proportional(const Instance& a, const Instance& b) {
  return is_proportional(flatten(a), flatten(b));
}

/// Representative of the proportionality class: the flattened graph scaled to
/// max |w| = 1, with each pair sum assigned to the lower-indexed agent. The
/// result is tagged Bounded; the game is preserved.
inline Instance repr(const Instance& inst) {
  const int n = inst.n();
  FlattenedGraph g = flatten(inst);
  Rational scale = g.max_abs();
  if (scale == 0) scale = 1;  // zero class: nothing to normalize
  std::vector<Rational> w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w[static_cast<std::size_t>(i) * n + j] = g.at(i, j) / scale;
  return Instance(n, std::move(w), WeightClass::bounded(), inst.game());
}

/// Counterpart profile making (d_alt, others') proportional to (d_i, others).
struct Completion {
  Profile others;
  /// flatten(d_alt, others') = lambda * flatten(d_i, others)
  Rational lambda;
};

namespace detail {

inline void check_member(const WeightClass& cls, const Declaration& d, const char* what) {
  for (std::size_t j = 0; j < d.values.size(); ++j) {
    if (static_cast<int>(j) == d.agent) {
      if (d.values[j] != 0) throw DomainError(std::string(what) + ": self value must be 0");
      continue;
    }
    if (!cls.admits(d.values[j]))
      throw DomainError(std::string(what) + " value " + hedonic::to_string(d.values[j]) + " outside class " +
                        cls.describe());
  }
}

inline Rational clamp_unit(const Rational& v) {
  if (v > 1) return Rational(1);
  if (v < -1) return Rational(-1);
  return v;
}

}  // namespace detail

inline Completion proportional_completion(const WeightClass& cls, const Declaration& own, const Declaration& alt,
                                          const Profile& others) {
  using Kind = WeightClass::Kind;
  if (cls.kind() == Kind::GeneralDuplex)
    throw DomainError("proportional completion is not available for general duplex weights");
  if (own.agent != alt.agent) throw ArgumentError("both declarations must belong to the same agent");
  const int n = static_cast<int>(own.values.size());
  if (alt.values.size() != own.values.size() || others.size() + 1 != static_cast<std::size_t>(n))
    throw ArgumentError("profile shape mismatch");
  const int i = own.agent;
  detail::check_member(cls, own, "declaration");
  detail::check_member(cls, alt, "alternative declaration");
  for (const auto& d : others) {
    if (d.agent == i || d.values.size() != own.values.size()) throw ArgumentError("malformed counterpart profile");
    detail::check_member(cls, d, "counterpart declaration");
  }

  // pair sum between i and j under the original profile
  auto pair_sum = [&](const Declaration& dj) { return own.values[dj.agent] + dj.values[i]; };

  Completion out;
  out.others = others;

  switch (cls.kind()) {
    case Kind::Arbitrary: {
      out.lambda = 1;
      for (auto& dj : out.others) dj.values[i] = pair_sum(dj) - alt.values[dj.agent];
      return out;
    }
    case Kind::NonNegative: {
      Rational lambda = 1;
      for (const auto& dj : others) {
        Rational s = pair_sum(dj);
        const Rational& target = alt.values[dj.agent];
        if (s == 0) {
          if (target > 0)
            throw DomainError("no proportional completion: zero pair sum with agent " + std::to_string(dj.agent + 1) +
                              " but positive alternative value");
          continue;
        }
        Rational candidate = Rational(1 + ceil_div(target / s));
        if (candidate > lambda) lambda = candidate;
      }
      out.lambda = lambda;
      for (auto& dj : out.others) {
        Rational s = pair_sum(dj);
        for (int k = 0; k < n; ++k)
          if (k != dj.agent) dj.values[k] *= lambda;
        dj.values[i] = lambda * s - alt.values[dj.agent];
      }
      return out;
    }
    case Kind::Bounded: {
      // Feasible lambda: every lambda*s_j - alt_j must lie in [-1,1] and every
      // rescaled pair sum among the others must stay within [-2,2].
      std::optional<Rational> lo;
      std::optional<Rational> hi;
      auto tighten_hi = [&](const Rational& v) {
        if (!hi || v < *hi) hi = v;
      };
      auto tighten_lo = [&](const Rational& v) {
        if (!lo || v > *lo) lo = v;
      };
      for (const auto& dj : others) {
        Rational s = pair_sum(dj);
        const Rational& a = alt.values[dj.agent];
        if (s > 0) {
          tighten_lo((a - 1) / s);
          tighten_hi((a + 1) / s);
        } else if (s < 0) {
          tighten_lo((a + 1) / s);
          tighten_hi((a - 1) / s);
        }
      }
      for (const auto& dj : others)
        for (const auto& dk : others) {
          if (dk.agent <= dj.agent) continue;
          Rational s = dj.values[dk.agent] + dk.values[dj.agent];
          if (s != 0) tighten_hi(Rational(2) / hedonic::abs(s));
        }
      Rational lambda = 1;
      if (hi && lambda > *hi) lambda = *hi;
      if (lo && lambda < *lo) lambda = *lo;
      if (lambda <= 0 || (hi && lambda > *hi) || (lo && lambda < *lo))
        throw DomainError("no proportional completion inside [-1,1] for this alternative declaration");
      out.lambda = lambda;
      if (lambda != 1) {
        for (auto& dj : out.others)
          for (auto& dk : out.others) {
            if (dk.agent <= dj.agent) continue;
            const Rational s = lambda * (dj.values[dk.agent] + dk.values[dj.agent]);
            dj.values[dk.agent] = detail::clamp_unit(s);
            dk.values[dj.agent] = s - dj.values[dk.agent];
          }
      }
      for (auto& dj : out.others) {
        // pair sums with i read from the untouched original profile
        const auto& orig = *std::find_if(others.begin(), others.end(),
                                         [&](const Declaration& d) { return d.agent == dj.agent; });
        dj.values[i] = lambda * pair_sum(orig) - alt.values[dj.agent];
      }
      return out;
    }
    case Kind::GeneralDuplex:
      break;
  }
  throw DomainError("unsupported weight class");
}

}  // namespace hedonic
