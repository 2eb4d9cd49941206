#include <gtest/gtest.h>

#include "support.hpp"

using namespace corg;
using test::kind_of;

namespace {

std::vector<fol::Formula> fig3_axioms() {
  std::vector<fol::Formula> out;
  for (const auto& t : test::fig3_triples()) out.push_back(translate_existential(t));
  return out;
}

std::vector<std::size_t> select(const std::set<std::string>& goals, double tol,
                                std::optional<std::size_t> depth, std::size_t g = 0) {
  auto axioms = fig3_axioms();
  AxiomIndex index(axioms);
  SineConfig cfg;
  cfg.tolerance = tol;
  cfg.max_depth = depth;
  cfg.generality_threshold = g;
  return sine_select(index, goals, cfg);
}

using Ids = std::vector<std::size_t>;

}  // namespace

TEST(AxiomIndex, OccurrenceCounts) {
  auto axioms = fig3_axioms();
  AxiomIndex index(axioms);
  EXPECT_EQ(index.occ("sun"), 1u);
  EXPECT_EQ(index.occ("causes"), 1u);
  EXPECT_EQ(index.occ("light"), 2u);
  EXPECT_EQ(index.occ("shadow"), 2u);
  EXPECT_EQ(index.occ("atlocation"), 3u);
  EXPECT_EQ(index.occ("ground"), 2u);
  EXPECT_EQ(index.occ("grass"), 1u);
  EXPECT_EQ(index.occ("moon"), 0u);
  EXPECT_EQ(index.axioms_with("ground").size(), 2u);
}

// Hand-run traces on the four fixture axioms (0: sun, 1: shadow/light,
// 2: shadow/ground, 3: grass/ground).
TEST(Sine, HandTracesFromSun) {
  EXPECT_EQ(select({"sun"}, 1.0, 1), (Ids{0}));
  EXPECT_EQ(select({"sun"}, 1.0, 2), (Ids{0, 1}));
  EXPECT_EQ(select({"sun"}, 1.0, 3), (Ids{0, 1, 2}));
  EXPECT_EQ(select({"sun"}, 1.0, std::nullopt), (Ids{0, 1, 2}));
  EXPECT_EQ(select({"sun"}, 1.5, std::nullopt), (Ids{0, 1, 2}));
  EXPECT_EQ(select({"sun"}, 3.0, std::nullopt), (Ids{0, 1, 2, 3}));
}

TEST(Sine, HandTracesFromGrass) {
  EXPECT_EQ(select({"grass"}, 1.0, 1), (Ids{3}));
  EXPECT_EQ(select({"grass"}, 1.0, 2), (Ids{2, 3}));
  EXPECT_EQ(select({"grass"}, 1.0, std::nullopt), (Ids{1, 2, 3}));
}

TEST(Sine, GeneralityThresholdFlattensRareSymbols) {
  EXPECT_EQ(select({"sun"}, 1.0, std::nullopt, 2), (Ids{0, 1, 2, 3}));
}

TEST(Sine, UnknownGoalsSelectNothing) {
  EXPECT_TRUE(select({"moon"}, 1.5, 3).empty());
}

TEST(Sine, ConfigErrors) {
  auto axioms = fig3_axioms();
  AxiomIndex index(axioms);
  EXPECT_EQ(kind_of([&] { sine_select(index, {}, {}); }), ErrorKind::empty_goal);
  SineConfig bad;
  bad.tolerance = 0.5;
  EXPECT_EQ(kind_of([&] { sine_select(index, {"sun"}, bad); }), ErrorKind::invalid_config);
  bad = {};
  bad.max_depth = 0;
  EXPECT_EQ(kind_of([&] { sine_select(index, {"sun"}, bad); }), ErrorKind::invalid_config);
  bad = {};
  bad.similarity_threshold = 1.5;
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::invalid_config);
}

TEST(SineProperties, MonotoneAndBoundedByClosure) {
  std::mt19937 rng(5);
  for (int round = 0; round < 30; ++round) {
    auto axioms = test::random_axioms(rng, 25, 12);
    AxiomIndex index(axioms);
    std::set<std::string> goals{"w" + std::to_string(rng() % 12)};
    auto run = [&](double tol, std::optional<std::size_t> depth) {
      SineConfig cfg;
      cfg.tolerance = tol;
      cfg.max_depth = depth;
      auto v = sine_select(index, goals, cfg);
      return std::set<std::size_t>(v.begin(), v.end());
    };
    auto closure = test::reachable_closure(axioms, goals);
    std::set<std::size_t> prev;
    for (double tol : {1.0, 1.2, 1.5, 2.0, 4.0}) {
      auto cur = run(tol, 3);
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      EXPECT_TRUE(std::includes(closure.begin(), closure.end(), cur.begin(), cur.end()));
      prev = cur;
    }
    EXPECT_EQ(run(1e18, std::nullopt), closure);
  }
}

TEST(SimilaritySine, SeedsPullInNearbySymbols) {
  auto axioms = fig3_axioms();
  AxiomIndex index(axioms);
  EmbeddingTable t(2);
  t.insert("sunshine", {1, 0.05});
  t.insert("sun", {1, 0});
  t.insert("grass", {0, 1});
  UnitVectors u(t, {});
  SineConfig cfg;
  cfg.tolerance = 1.0;
  cfg.max_depth = 1;
  EXPECT_TRUE(similarity_sine_select(index, {"sunshine"}, cfg, u).empty());
  cfg.similarity_threshold = 0.9;
  EXPECT_EQ(similarity_seeds(index, {"sunshine"}, 0.9, u), (std::set<std::string>{"sun", "sunshine"}));
  EXPECT_EQ(similarity_sine_select(index, {"sunshine"}, cfg, u), (Ids{0}));
  EXPECT_EQ(similarity_sine_select(index, {"sunshine"}, cfg, t), (Ids{0}));
}

TEST(SimilaritySine, SupersetOfPlainSine) {
  std::mt19937 rng(9);
  EmbeddingTable t(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 12; ++i) t.insert("w" + std::to_string(i), {g(rng), g(rng), g(rng)});
  UnitVectors u(t, {});
  for (int round = 0; round < 20; ++round) {
    auto axioms = test::random_axioms(rng, 20, 12);
    AxiomIndex index(axioms);
    std::set<std::string> goals{"w" + std::to_string(rng() % 12)};
    SineConfig cfg;
    auto plain = sine_select(index, goals, cfg);
    cfg.similarity_threshold = 0.5;
    auto sim = similarity_sine_select(index, goals, cfg, u);
    EXPECT_TRUE(std::includes(sim.begin(), sim.end(), plain.begin(), plain.end()));
  }
}

TEST(Prefilter, KeepsTriplesWhoseObjectIsNearTheProblem) {
  auto t = load_table(test::data("fixture.vec")).table;
  std::vector<Triple> triples{test::triple("sun", "is_a", "star"), test::triple("sun", "causes", "light")};
  std::vector<std::string> words{"body", "cast", "shadow", "grass", "sun", "rising", "cut"};
  auto kept = triple_prefilter(triples, words, 0.4, t);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].object.name, "light");
}

TEST(Prefilter, ThresholdIsInclusiveAndOovScoresZero) {
  EmbeddingTable t(2);
  t.insert("a", {1, 0});
  t.insert("b", {1, 1});
  std::vector<Triple> triples{test::triple("x", "r", "b"), test::triple("x", "r", "unknown")};
  std::vector<std::string> words{"a"};
  UnitVectors u(t, {});
  PrefilterConfig cfg;
  cfg.theta = cosine(*t.find("a"), *t.find("b"));
  EXPECT_EQ(triple_prefilter_ids(triples, words, cfg, u), (Ids{0}));
  cfg.theta = 0.0;
  EXPECT_EQ(triple_prefilter_ids(triples, words, cfg, u), (Ids{0, 1}));
  cfg.theta = 0.99;
  EXPECT_TRUE(triple_prefilter_ids(triples, words, cfg, u).empty());
  cfg.include_subject = true;
  triples[0].subject = ConceptId("a");
  EXPECT_EQ(triple_prefilter_ids(triples, words, cfg, u), (Ids{0}));
}
