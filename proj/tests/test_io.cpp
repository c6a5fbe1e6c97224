#include <gtest/gtest.h>

#include <filesystem>

#include "hedonic/auditor.hpp"
#include "hedonic/io.hpp"
#include "hedonic/random.hpp"

using namespace hedonic;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hedonic_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(IoTest, RationalForms) {
  EXPECT_EQ(io::rational_from(io::json("3/6")), Rational(1, 2));
  EXPECT_EQ(io::rational_from(io::json(-2)), -2);
  EXPECT_EQ(io::rational_from(io::json(0.25)), Rational(1, 4));
  EXPECT_THROW(io::rational_from(io::json::array()), ParseError);
}

TEST(IoTest, WeightClassForms) {
  EXPECT_EQ(io::weight_class_from(io::json("duplex:x=3/2")), WeightClass::duplex(Rational(3, 2)));
  EXPECT_EQ(io::weight_class_from(io::json("nonnegative")), WeightClass::non_negative());
  for (const auto& c : {WeightClass::arbitrary(), WeightClass::bounded(), WeightClass::duplex(5)})
    EXPECT_EQ(io::weight_class_from(io::to_json(c)), c);
  EXPECT_THROW(io::weight_class_from(io::json("circle")), ParseError);
}

TEST(IoTest, InstanceRoundTrip) {
  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    const WeightClass cls = t % 2 ? WeightClass::duplex(Rational(5, 2)) : WeightClass::arbitrary();
    const Instance inst = random_instance(cls, 1 + t % 6, t % 3 ? Game::ASHG : Game::FHG, rng);
    const io::json j = io::to_json(inst);
    EXPECT_EQ(io::instance_from(io::json::parse(j.dump())), inst);
  }
}

TEST(IoTest, InstanceValidation) {
  const auto bad = io::json::parse(R"({"game":"ASHG","class":"bounded","n":2,"weights":[["0","2"],["0","0"]]})");
  EXPECT_THROW(io::instance_from(bad), DomainError);
  const auto ragged = io::json::parse(R"({"game":"ASHG","class":"bounded","n":2,"weights":[["0"],["0","0"]]})");
  EXPECT_THROW(io::instance_from(ragged), ParseError);
  EXPECT_THROW(io::instance_from(io::json::object()), ParseError);
}

TEST(IoTest, PartitionsAreOneBased) {
  const Partition p(3, {Coalition::of({0, 2}), Coalition::of({1})});
  EXPECT_EQ(io::to_json(p).dump(), "[[1,3],[2]]");
  EXPECT_EQ(io::partition_from(io::json::parse("[[2],[3,1]]"), 3), p);
  EXPECT_THROW(io::partition_from(io::json::parse("[[1,2]]"), 3), StructuralError);
  EXPECT_THROW(io::partition_from(io::json::parse("[[1,4],[2,3]]"), 3), ParseError);
}

TEST(IoTest, MechanismNames) {
  const auto d3 = WeightClass::duplex(3);
  EXPECT_EQ(io::mechanism_from_name("mech2", d3, Game::ASHG), MechanismSpec::duplex_split(3));
  EXPECT_EQ(io::mechanism_from_name("opt:advgrand", d3, Game::ASHG),
            MechanismSpec::optimal(TiePolicy::AdversarialGrand, d3));
  EXPECT_EQ(io::mechanism_from_name("repr+opt", WeightClass::arbitrary(), Game::FHG),
            MechanismSpec::optimal(TiePolicy::LexMin, WeightClass::arbitrary(), Game::FHG).composed_with_repr());
  EXPECT_THROW(io::mechanism_from_name("mech2", WeightClass::bounded(), Game::ASHG), DomainError);
  EXPECT_THROW(io::mechanism_from_name("opt:random", d3, Game::ASHG), ParseError);
  EXPECT_THROW(io::mechanism_from_name("repr+m1", d3, Game::ASHG), ParseError);
  for (const auto& m : {MechanismSpec::matching_repr(WeightClass::bounded(), Game::FHG), MechanismSpec::duplex_largest(),
                        MechanismSpec::adversarial_pair(),
                        MechanismSpec::optimal(TiePolicy::PreferSplitOfGrand, d3).composed_with_repr()})
    EXPECT_EQ(io::mechanism_from(io::to_json(m)), m);
}

TEST(IoTest, SpaceStrings) {
  EXPECT_EQ(io::space_from_string("duplex:x=3", 3).own_size(), 9u);
  EXPECT_EQ(io::space_from_string("bounded:step=1/2", 2).own_size(), 5u);
  const auto g = io::space_from_string("grid:values=-4,-1,0,1", 3);
  EXPECT_EQ(g.values().size(), 4u);
  EXPECT_EQ(io::space_from_string("grid:class=nonnegative;values=1,0", 2).weight_class(), WeightClass::non_negative());
  EXPECT_THROW(io::space_from_string("duplex", 3), ParseError);
  EXPECT_THROW(io::space_from_string("ball:r=1", 3), ParseError);
}

TEST(IoTest, WitnessRoundTripReplays) {
  const auto ex1 = MechanismSpec::adversarial_pair();
  const auto nom = audit_nom(ex1, DeclarationSpace::bounded_grid(2, Rational(1, 2)));
  const io::json j = io::to_json(nom, ex1);
  EXPECT_EQ(j["verdict"], "witness");
  EXPECT_EQ(j["witness"]["condition"], "NOM-inf");
  EXPECT_EQ(j["witness"]["manipulation"]["values"].dump(), R"(["0","-1"])");
  const auto parsed = io::json::parse(j.dump());
  const MechanismSpec spec = io::mechanism_from(parsed["mechanism"]);
  EXPECT_TRUE(replay(spec, io::witness_from(parsed["witness"])));

  const auto si = audit_si(ex1, 200);
  ASSERT_FALSE(si.passed());
  EXPECT_TRUE(replay(ex1, io::witness_from(io::json::parse(io::to_json(*si.witness).dump()))));
}

TEST(IoTest, PassReportHasNoWitness) {
  const auto m1 = MechanismSpec::matching_repr(WeightClass::bounded());
  const io::json j = io::to_json(audit_nom(m1, DeclarationSpace::bounded_grid(2, 1)), m1);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_FALSE(j.contains("witness"));
  EXPECT_EQ(j["stats"]["profiles"], 18);
}

TEST(IoTest, CorpusRegenerates) {
  const fs::path dir = scratch("corpus");
  std::vector<io::CorpusEntry> entries;
  for (int k = 0; k < 6; ++k)
    entries.push_back({"inst" + std::to_string(k) + ".json", k % 2 ? WeightClass::bounded() : WeightClass::arbitrary(),
                       2 + k, k % 3 ? Game::ASHG : Game::FHG, static_cast<std::uint64_t>(100 + k)});
  io::write_corpus(dir, entries);
  EXPECT_TRUE(io::verify_corpus(dir));
  const auto corpus = io::load_corpus(dir);
  ASSERT_EQ(corpus.size(), 6u);
  EXPECT_EQ(corpus[3], entries[3].generate());

  io::write_json_file(dir / entries[0].file, io::to_json(Instance::zeros(2, WeightClass::arbitrary(), Game::FHG)));
  EXPECT_FALSE(io::verify_corpus(dir));
  fs::remove_all(dir);
}

TEST(IoTest, MissingFile) { EXPECT_THROW(io::read_json_file("/nonexistent/instance.json"), ParseError); }
