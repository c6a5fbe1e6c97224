#include <gtest/gtest.h>

#include "hedonic/canonical.hpp"
#include "hedonic/random.hpp"

using namespace hedonic;

namespace {

FlattenedGraph edge_graph(int n, int a, int b, const Rational& w) {
  FlattenedGraph g(n);
  g.set(a, b, w);
  return g;
}

Instance chain4() {
  return Instance::from_rows({{0, 3, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 3}, {0, 0, 0, 0}}, WeightClass::arbitrary(),
                             Game::ASHG);
}

Declaration decl(int agent, std::vector<Rational> values) { return Declaration{agent, std::move(values)}; }

}  // namespace

TEST(ProportionalTest, Examples) {
  auto w = is_proportional(edge_graph(3, 0, 1, 4), edge_graph(3, 0, 1, 1));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->lambda, 4);
  const FlattenedGraph g = flatten(chain4());
  ASSERT_TRUE(is_proportional(g, g));
  EXPECT_EQ(is_proportional(g, g)->lambda, 1);
  EXPECT_FALSE(is_proportional(edge_graph(3, 0, 1, 1), edge_graph(3, 0, 2, 1)));
  EXPECT_THROW(is_proportional(FlattenedGraph(2), FlattenedGraph(3)), ArgumentError);
}

TEST(ProportionalTest, ZeroGraphConvention) {
  EXPECT_EQ(is_proportional(FlattenedGraph(3), FlattenedGraph(3))->lambda, 1);
  EXPECT_FALSE(is_proportional(FlattenedGraph(3), edge_graph(3, 0, 1, 1)));
  EXPECT_FALSE(is_proportional(edge_graph(3, 0, 1, 1), FlattenedGraph(3)));
  EXPECT_FALSE(is_proportional(edge_graph(2, 0, 1, -1), edge_graph(2, 0, 1, 1)));
}

TEST(ProportionalTest, EquivalenceRelation) {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const Instance a = random_instance(WeightClass::arbitrary(), 2 + t % 4, Game::ASHG, rng);
    if (flatten(a).is_zero()) continue;
    Rational l1, l2;
    const Instance b = random_proportional(a, rng, &l1);
    const Instance c = random_proportional(b, rng, &l2);
    ASSERT_EQ(is_proportional(a, a)->lambda, 1);
    ASSERT_EQ(is_proportional(b, a)->lambda, l1);
    ASSERT_EQ(is_proportional(a, b)->lambda, 1 / l1);
    ASSERT_EQ(is_proportional(c, a)->lambda, l1 * l2);
  }
}

TEST(ReprTest, Example) {
  const Instance inst =
      Instance::from_rows({{0, 2, -4}, {2, 0, 0}, {0, 0, 0}}, WeightClass::arbitrary(), Game::FHG);
  const Instance r = repr(inst);
  const Instance expected =
      Instance::from_rows({{0, 1, -1}, {0, 0, 0}, {0, 0, 0}}, WeightClass::bounded(), Game::FHG);
  EXPECT_EQ(r, expected);
}

TEST(ReprTest, ZeroInstanceStaysZero) {
  const Instance z = Instance::zeros(3, WeightClass::non_negative(), Game::ASHG);
  EXPECT_EQ(repr(z), Instance::zeros(3, WeightClass::bounded(), Game::ASHG));
}

TEST(ReprTest, IdempotentOnChain) { EXPECT_EQ(repr(repr(chain4())), repr(chain4())); }

TEST(ReprTest, RepresentativeIsProportionalAndShared) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const WeightClass cls = t % 3 == 0 ? WeightClass::arbitrary()
                            : t % 3 == 1 ? WeightClass::non_negative()
                                         : WeightClass::bounded();
    const Instance a = random_instance(cls, 2 + t % 5, Game::ASHG, rng);
    const Instance b = random_proportional(a, rng);
    ASSERT_EQ(repr(a), repr(b));
    ASSERT_EQ(repr(repr(a)), repr(a));
    if (!flatten(a).is_zero()) {
      ASSERT_TRUE(is_proportional(repr(a), a));
    }
  }
}

TEST(CompletionTest, ArbitraryExample) {
  const Completion c = proportional_completion(WeightClass::arbitrary(), decl(0, {0, 5}), decl(0, {0, 3}),
                                               {decl(1, {-1, 0})});
  EXPECT_EQ(c.others[0].values[0], 1);
  EXPECT_EQ(c.lambda, 1);
}

TEST(CompletionTest, NonNegativeExample) {
  const Completion c = proportional_completion(WeightClass::non_negative(), decl(0, {0, 1}), decl(0, {0, 2}),
                                               {decl(1, {0, 0})});
  EXPECT_EQ(c.lambda, 3);
  EXPECT_EQ(c.others[0].values[0], 1);
  const Instance before = assemble(decl(0, {0, 1}), {decl(1, {0, 0})}, WeightClass::non_negative(), Game::ASHG);
  const Instance after = assemble(decl(0, {0, 2}), c.others, WeightClass::non_negative(), Game::ASHG);
  EXPECT_EQ(is_proportional(after, before)->lambda, 3);
}

TEST(CompletionTest, NonNegativeZeroPairSumIsInfeasible) {
  EXPECT_THROW(proportional_completion(WeightClass::non_negative(), decl(0, {0, 0}), decl(0, {0, 1}),
                                       {decl(1, {0, 0})}),
               DomainError);
}

// d12=1, d21=0, d'12=-1 needs d'21 = lambda - (-1) = lambda + 1 with lambda > 0,
// which always leaves [-1,1]: no bounded completion exists for this input.
TEST(CompletionTest, BoundedInfeasibleInput) {
  EXPECT_THROW(proportional_completion(WeightClass::bounded(), decl(0, {0, 1}), decl(0, {0, -1}), {decl(1, {0, 0})}),
               DomainError);
}

TEST(CompletionTest, BoundedRescales) {
  const Declaration own = decl(0, {0, 1});
  const Declaration alt = decl(0, {0, Rational(-1, 2)});
  const Profile others{decl(1, {1, 0})};
  const Completion c = proportional_completion(WeightClass::bounded(), own, alt, others);
  EXPECT_EQ(c.lambda, Rational(1, 4));
  EXPECT_EQ(c.others[0].values[0], 1);
  const Instance before = assemble(own, others, WeightClass::bounded(), Game::ASHG);
  const Instance after = assemble(alt, c.others, WeightClass::bounded(), Game::ASHG);
  EXPECT_EQ(is_proportional(before, after)->lambda, 4);
}

TEST(CompletionTest, DuplexUnsupported) {
  EXPECT_THROW(proportional_completion(WeightClass::duplex(2), decl(0, {0, 1}), decl(0, {0, 0}), {decl(1, {1, 0})}),
               DomainError);
}

TEST(CompletionTest, RandomCompletionsStayInClassAndProportional) {
  Rng rng(99);
  int feasible = 0;
  for (int t = 0; t < 300; ++t) {
    const WeightClass cls = t % 3 == 0 ? WeightClass::arbitrary()
                            : t % 3 == 1 ? WeightClass::non_negative()
                                         : WeightClass::bounded();
    const int n = 2 + t % 4;
    const Instance inst = random_instance(cls, n, Game::ASHG, rng);
    const int i = static_cast<int>(rng.uniform(0, n - 1));
    Declaration alt{i, std::vector<Rational>(n)};
    for (int j = 0; j < n; ++j)
      if (j != i) alt.values[j] = random_weight(cls, rng);
    Profile others;
    for (int j = 0; j < n; ++j)
      if (j != i) others.push_back(inst.declaration(j));
    Completion c;
    try {
      c = proportional_completion(cls, inst.declaration(i), alt, others);
    } catch (const DomainError&) {
      continue;  // degenerate inputs are reported, never silently patched
    }
    ++feasible;
    const Instance after = assemble(alt, c.others, cls, Game::ASHG);  // validates class membership
    auto w = is_proportional(after, inst);
    ASSERT_TRUE(w);
    if (!flatten(inst).is_zero()) {
      ASSERT_EQ(w->lambda, c.lambda);
    }
  }
  EXPECT_GT(feasible, 200);
}
