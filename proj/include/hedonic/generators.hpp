#pragma once

#include <vector>

#include "hedonic/core.hpp"
#include "hedonic/mechanisms.hpp"

namespace hedonic {

/// Path 1-2-...-n with flattened weights ŵ(k,k+1) = edges[k], each carried
/// by the lower agent.
inline Instance chain_instance(const std::vector<Rational>& edges, Game game = Game::ASHG,
                               const WeightClass& cls = WeightClass::arbitrary()) {
  const int n = static_cast<int>(edges.size()) + 1;
  std::vector<Rational> w(static_cast<std::size_t>(n) * n);
  for (int k = 0; k + 1 < n; ++k) w[static_cast<std::size_t>(k) * n + k + 1] = edges[k];
  return Instance(n, std::move(w), cls, game);
}

/// The agent declares `own` (zeros when empty) and everyone else follows the
/// forcing profile for `target`.
inline Instance forcing_instance(int n, int agent, Coalition target, const WeightClass& cls = WeightClass::arbitrary(),
                                 Declaration own = {}) {
  if (agent < 0 || agent >= n) throw ArgumentError("agent out of range");
  if (own.values.empty()) own = Declaration{agent, std::vector<Rational>(n)};
  if (own.agent != agent || static_cast<int>(own.values.size()) != n) throw ArgumentError("own declaration mismatch");
  return assemble(own, forcing_profile(own, target, cls), cls, Game::ASHG);
}

}  // namespace hedonic
