#pragma once

// Independent reference implementations used only by tests. They share no
// code with the library beyond the value types.

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

#include "hedonic/core.hpp"

namespace oracle {

using hedonic::Instance;
using hedonic::Rational;

/// Every set partition as a label vector (agent -> block id), by recursion.
inline void each_labeling(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> labels(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int blocks) {
    if (pos == n) {
      visit(labels);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      labels[pos] = b;
      rec(pos + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) {
    visit(labels);
    return;
  }
  rec(0, 0);
}

/// Social welfare as the sum of per-agent utilities, straight from the weights.
inline Rational welfare(const Instance& inst, const std::vector<int>& labels) {
  Rational total = 0;
  for (int i = 0; i < inst.n(); ++i) {
    Rational u = 0;
    int size = 0;
    for (int j = 0; j < inst.n(); ++j)
      if (labels[j] == labels[i]) {
        u += inst.weight(i, j);
        ++size;
      }
    if (inst.game() == hedonic::Game::FHG) u /= size;
    total += u;
  }
  return total;
}

inline Rational optimum(const Instance& inst) {
  Rational best = 0;
  bool first = true;
  each_labeling(inst.n(), [&](const std::vector<int>& l) {
    Rational w = welfare(inst, l);
    if (first || w > best) best = w;
    first = false;
  });
  return best;
}

inline std::vector<std::vector<int>> optimal_labelings(const Instance& inst) {
  const Rational best = optimum(inst);
  std::vector<std::vector<int>> out;
  each_labeling(inst.n(), [&](const std::vector<int>& l) {
    if (welfare(inst, l) == best) out.push_back(l);
  });
  return out;
}

/// Maximum total weight over all matchings of the symmetric weight function
/// restricted to positive edges.
inline Rational matching_weight(int n, const std::function<Rational(int, int)>& w) {
  std::vector<bool> used(n, false);
  std::function<Rational(int)> rec = [&](int v) -> Rational {
    while (v < n && used[v]) ++v;
    if (v >= n) return Rational(0);
    used[v] = true;
    Rational best = rec(v + 1);  // v unmatched
    for (int u = v + 1; u < n; ++u) {
      if (used[u] || w(v, u) <= 0) continue;
      used[u] = true;
      best = std::max(best, w(v, u) + rec(v + 1));
      used[u] = false;
    }
    used[v] = false;
    return best;
  };
  return rec(0);
}

}  // namespace oracle
