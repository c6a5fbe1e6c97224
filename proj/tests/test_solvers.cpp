#include <gtest/gtest.h>

#include "hedonic/matching.hpp"
#include "hedonic/random.hpp"
#include "hedonic/solvers.hpp"
#include "oracle.hpp"

using namespace hedonic;

namespace {

Instance chain4(Game game) {
  return Instance::from_rows({{0, 3, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 3}, {0, 0, 0, 0}}, WeightClass::arbitrary(), game);
}

Instance fig1(Game game = Game::ASHG) {
  return Instance::from_rows({{0, 1}, {Rational(-1, 10), 0}}, WeightClass::arbitrary(), game);
}

// agent 1: (.,-3,1); agents 2 and 3 value everyone at 1
Instance duplex_tie() {
  return Instance::from_rows({{0, -3, 1}, {1, 0, 1}, {1, 1, 0}}, WeightClass::duplex(3), Game::ASHG);
}

std::vector<Partition> oracle_optima(const Instance& inst) {
  std::vector<Partition> out;
  for (const auto& l : oracle::optimal_labelings(inst)) out.push_back(Partition::from_labels(l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(CoalitionValueTest, Examples) {
  FlattenedGraph g(3);
  g.set(0, 1, 1);
  g.set(0, 2, 1);
  g.set(1, 2, 1);
  EXPECT_EQ(coalition_value(g, Game::ASHG, Coalition::of({1})), 0);
  EXPECT_EQ(coalition_value(g, Game::ASHG, Coalition::all(3)), 3);
  EXPECT_EQ(coalition_value(g, Game::FHG, Coalition::all(3)), 1);
  EXPECT_THROW(coalition_value(g, Game::ASHG, Coalition()), ArgumentError);
}

TEST(OptimalValueTest, Examples) {
  EXPECT_EQ(optimal_value(fig1()), Rational(9, 10));
  EXPECT_EQ(optimal_value(chain4(Game::ASHG)), 10);
  EXPECT_EQ(optimal_value(chain4(Game::FHG)), 3);
  EXPECT_THROW(optimal_value(Instance::zeros(17, WeightClass::arbitrary(), Game::ASHG)), CapacityError);
}

TEST(OptimalValueTest, DpMatchesEnumeration) {
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    const WeightClass cls = t % 4 == 0   ? WeightClass::arbitrary()
                            : t % 4 == 1 ? WeightClass::non_negative()
                            : t % 4 == 2 ? WeightClass::bounded()
                                         : WeightClass::duplex(Rational(rng.uniform(1, 8), 2));
    const Instance inst = random_instance(cls, 1 + t % 7, t % 2 ? Game::FHG : Game::ASHG, rng);
    const Rational v = optimal_value(inst);
    ASSERT_EQ(v, oracle::optimum(inst));
    ASSERT_GE(v, 0);
    ASSERT_EQ(count_optimal_partitions(inst), oracle_optima(inst).size());
    ASSERT_EQ(all_optimal_partitions(inst), oracle_optima(inst));
  }
}

TEST(OptimalPartitionTest, DuplexTieExample) {
  const Instance inst = duplex_tie();
  const Partition grand = Partition::grand(3);
  const Partition split(3, {Coalition::of({0}), Coalition::of({1, 2})});
  const Partition other(3, {Coalition::of({0, 2}), Coalition::of({1})});
  // {1,3},{2} is optimal too: its only internal edge has flattened weight 2
  EXPECT_EQ(all_optimal_partitions(inst), (std::vector<Partition>{split, grand, other}));
  EXPECT_EQ(optimal_value(inst), 2);
  EXPECT_EQ(optimal_partition(inst, TiePolicy::PreferSplitOfGrand), split);
  EXPECT_EQ(optimal_partition(inst, TiePolicy::AdversarialGrand), grand);
  EXPECT_EQ(optimal_partition(inst, TiePolicy::LexMin), split);
}

TEST(OptimalPartitionTest, AllNegativeGivesSingletons) {
  const Instance inst =
      Instance::from_rows({{0, -1, -2}, {-1, 0, -1}, {-3, -1, 0}}, WeightClass::arbitrary(), Game::ASHG);
  for (TiePolicy p : kAllTiePolicies) EXPECT_EQ(optimal_partition(inst, p), Partition::singletons(3));
}

TEST(OptimalPartitionTest, LargestBlockExample) {
  const Instance inst = Instance::from_rows({{0, -1, 1}, {1, 0, -1}, {-1, -1, 0}}, WeightClass::duplex(1), Game::ASHG);
  const auto optima = all_optimal_partitions(inst);
  EXPECT_NE(std::find(optima.begin(), optima.end(), Partition::singletons(3)), optima.end());
  const Partition pair(3, {Coalition::of({0, 1}), Coalition::of({2})});
  EXPECT_NE(std::find(optima.begin(), optima.end(), pair), optima.end());
  EXPECT_EQ(optimal_partition(inst, TiePolicy::PreferLargestBlock), pair);
}

TEST(OptimalPartitionTest, PoliciesAgreeWithOracleSelection) {
  Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    // duplex grids produce many ties
    const WeightClass cls = t % 2 ? WeightClass::duplex(Rational(rng.uniform(1, 6))) : WeightClass::bounded();
    const Instance inst = random_instance(cls, 2 + t % 5, t % 3 ? Game::ASHG : Game::FHG, rng);
    const auto optima = oracle_optima(inst);
    const Rational best = oracle::optimum(inst);
    for (TiePolicy p : kAllTiePolicies) ASSERT_EQ(social_welfare(inst, optimal_partition(inst, p)), best);

    ASSERT_EQ(optimal_partition(inst, TiePolicy::LexMin), optima.front());

    int largest = 0;
    for (const auto& p : optima) largest = std::max(largest, p.largest_block());
    Partition pick;
    for (const auto& p : optima)
      if (p.largest_block() == largest) {
        pick = p;
        break;
      }
    ASSERT_EQ(optimal_partition(inst, TiePolicy::PreferLargestBlock), pick);

    const int n = inst.n();
    const bool grand_opt = std::find(optima.begin(), optima.end(), Partition::grand(n)) != optima.end();
    std::optional<Partition> split;
    for (int j = 0; j < n && grand_opt; ++j) {
      const Partition s(n, {Coalition::all(n).without(j), Coalition::singleton(j)});
      if (std::find(optima.begin(), optima.end(), s) != optima.end()) {
        split = s;
        break;
      }
    }
    if (split) {
      ASSERT_EQ(optimal_partition(inst, TiePolicy::PreferSplitOfGrand), *split);
      ASSERT_EQ(optimal_partition(inst, TiePolicy::AdversarialGrand), Partition::grand(n));
    } else {
      ASSERT_EQ(optimal_partition(inst, TiePolicy::PreferSplitOfGrand), optima.front());
      ASSERT_EQ(optimal_partition(inst, TiePolicy::AdversarialGrand), optima.front());
    }
  }
}

TEST(OptimalPartitionTest, LargerInstancesUseDpExtraction) {
  Rng rng(6);
  for (int t = 0; t < 2; ++t) {
    const Instance inst = random_instance(WeightClass::duplex(2), 11, Game::ASHG, rng);
    for (TiePolicy p : kAllTiePolicies)
      EXPECT_EQ(social_welfare(inst, optimal_partition(inst, p)), optimal_value(inst));
  }
}

TEST(AllOptimalTest, Examples) {
  EXPECT_EQ(all_optimal_partitions(fig1()), std::vector<Partition>{Partition::grand(2)});
  const Instance zero = Instance::zeros(2, WeightClass::arbitrary(), Game::ASHG);
  EXPECT_EQ(all_optimal_partitions(zero).size(), 2u);
  EXPECT_THROW(all_optimal_partitions(Instance::zeros(11, WeightClass::arbitrary(), Game::ASHG)), CapacityError);
}

// Within any optimal block, the internal flattened weight is at most
// |C| times the best matching restricted to C.
TEST(MatchingBoundTest, OptimalBlocksRespectBound) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const Instance inst = random_instance(WeightClass::arbitrary(), 2 + t % 7, Game::ASHG, rng);
    const FlattenedGraph g = flatten(inst);
    const Partition best = optimal_partition(inst, TiePolicy::LexMin);
    for (Coalition c : best.blocks()) {
      const auto m = c.members();
      FlattenedGraph sub(static_cast<int>(m.size()));
      for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = a + 1; b < m.size(); ++b) sub.set(static_cast<int>(a), static_cast<int>(b), g.at(m[a], m[b]));
      ASSERT_LE(coalition_value(g, Game::ASHG, c), c.size() * max_weight_matching(sub).weight);
    }
  }
}
