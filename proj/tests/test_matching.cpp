#include <gtest/gtest.h>

#include <set>

#include "hedonic/matching.hpp"
#include "hedonic/random.hpp"
#include "oracle.hpp"

using namespace hedonic;

namespace {

FlattenedGraph chain_graph() {
  FlattenedGraph g(4);
  g.set(0, 1, 3);
  g.set(1, 2, 4);
  g.set(2, 3, 3);
  return g;
}

FlattenedGraph random_graph(int n, Rng& rng, int lo = -6, int hi = 6) {
  FlattenedGraph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.set(a, b, Rational(rng.uniform(lo, hi), rng.uniform(1, 3)));
  return g;
}

bool valid_matching(int n, const std::vector<Edge>& edges) {
  std::vector<int> seen(n, 0);
  for (auto [a, b] : edges) {
    if (a >= b || b >= n) return false;
    if (seen[a]++ || seen[b]++) return false;
  }
  return true;
}

}  // namespace

TEST(MatchingTest, ChainExample) {
  const Matching m = max_weight_matching(chain_graph());
  EXPECT_EQ(m.edges, (std::vector<Edge>{{0, 1}, {2, 3}}));
  EXPECT_EQ(m.weight, 6);
  EXPECT_EQ(brute_force_matching(chain_graph()), m);
}

TEST(MatchingTest, NonPositiveGraphGivesEmptyMatching) {
  FlattenedGraph g(4);
  g.set(0, 1, -1);
  g.set(2, 3, 0);
  EXPECT_TRUE(max_weight_matching(g).edges.empty());
  EXPECT_EQ(max_weight_matching(g).weight, 0);
  EXPECT_EQ(brute_force_matching(g), max_weight_matching(g));
}

TEST(MatchingTest, TriangleTieBreak) {
  FlattenedGraph g(3);
  g.set(0, 1, 1);
  g.set(0, 2, 1);
  g.set(1, 2, 1);
  EXPECT_EQ(max_weight_matching(g).edges, (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(brute_force_matching(g).edges, (std::vector<Edge>{{0, 1}}));
}

TEST(MatchingTest, BlossomAgreesWithOracles) {
  Rng rng(2024);
  for (int t = 0; t < 400; ++t) {
    const int n = 1 + t % 10;
    const FlattenedGraph g = t % 4 == 0 ? random_graph(n, rng, -1, 2) : random_graph(n, rng);
    const Matching fast = max_weight_matching(g);
    const Matching slow = brute_force_matching(g);
    ASSERT_TRUE(valid_matching(n, fast.edges));
    ASSERT_EQ(fast.weight, slow.weight) << "trial " << t;
    ASSERT_EQ(fast.edges, slow.edges) << "trial " << t;
    ASSERT_EQ(fast.weight, oracle::matching_weight(n, [&](int a, int b) { return g.at(a, b); }));
    Rational sum = 0;
    for (auto [a, b] : fast.edges) sum += g.at(a, b);
    ASSERT_EQ(sum, fast.weight);
  }
}

TEST(MatchingTest, BlossomOnLargerGraphsMatchesRecursiveOracle) {
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    const FlattenedGraph g = random_graph(12, rng, -2, 5);
    const Rational w = detail::blossom_weight(12, detail::positive_edges(g));
    ASSERT_EQ(w, oracle::matching_weight(12, [&](int a, int b) { return g.at(a, b); }));
  }
}

TEST(MatchingTest, BruteForceCap) { EXPECT_THROW(brute_force_matching(FlattenedGraph(11)), CapacityError); }

TEST(OneFactorizationTest, Examples) {
  EXPECT_EQ(clique_one_factorization(2), (std::vector<std::vector<Edge>>{{{0, 1}}}));
  EXPECT_EQ(clique_one_factorization(4).size(), 3u);
  EXPECT_EQ(clique_one_factorization(5).size(), 5u);
  EXPECT_THROW(clique_one_factorization(1), ArgumentError);
}

TEST(OneFactorizationTest, PartitionsEdgeSet) {
  for (int k = 2; k <= 12; ++k) {
    const auto rounds = clique_one_factorization(k);
    EXPECT_EQ(static_cast<int>(rounds.size()), k % 2 == 0 ? k - 1 : k);
    std::set<Edge> all;
    std::size_t total = 0;
    for (const auto& r : rounds) {
      EXPECT_TRUE(valid_matching(k, r));
      total += r.size();
      all.insert(r.begin(), r.end());
    }
    EXPECT_EQ(total, all.size());
    EXPECT_EQ(all.size(), static_cast<std::size_t>(k * (k - 1) / 2));
  }
}
