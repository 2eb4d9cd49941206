#include <gtest/gtest.h>

#include "support.hpp"

using namespace corg;
using namespace corg::fol;
using test::kind_of;

namespace {

std::vector<std::string> rendered(const std::vector<Clause>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(to_string(c));
  return out;
}

}  // namespace

TEST(Clausify, ExistentialAxiomSkolemizesOverTheUniversal) {
  auto cs = clausify(parse_fol("! [X] : (sun(X) => ? [Y] : (causes(X,Y) & light(Y)))"), "t1");
  EXPECT_EQ(rendered(cs), (std::vector<std::string>{"sun(X) -> causes(X,sk_t1_0(X))",
                                                    "sun(X) -> light(sk_t1_0(X))"}));
  for (const auto& c : cs) {
    EXPECT_TRUE(c.is_horn());
    EXPECT_TRUE(c.is_range_restricted());
    EXPECT_EQ(c.origin, "t1");
  }
}

TEST(Clausify, TextFormulaBecomesGroundFacts) {
  auto cs = clausify(parse_fol("exists A (sun(A) & exists B (r1Actor(B,A) & rise(B)))"), "q");
  EXPECT_EQ(rendered(cs),
            (std::vector<std::string>{"sun(sk_q_0)", "r1Actor(sk_q_1,sk_q_0)", "rise(sk_q_1)"}));
  for (const auto& c : cs) EXPECT_TRUE(c.is_fact());
}

TEST(Clausify, NegationAndDistribution) {
  auto cs = clausify(parse_fol("~(a & b) | (c & d)"), "x");
  EXPECT_EQ(rendered(cs), (std::vector<std::string>{"a & b -> c", "a & b -> d"}));
  auto neg = clausify(parse_fol("~ ? [X] : p(X)"), "n");
  ASSERT_EQ(neg.size(), 1u);
  EXPECT_TRUE(neg[0].head.empty());
  EXPECT_EQ(to_string(neg[0]), "p(X) -> false");
}

TEST(Clausify, NonHornOutputIsVisible) {
  auto cs = clausify(parse_fol("! [X] : (p(X) => (q(X) | r(X)))"), "d");
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_FALSE(cs[0].is_horn());
}

TEST(Clausify, NestedUniversalsAreSkolemArguments) {
  auto cs = clausify(parse_fol("! [X] : ! [Y] : ? [Z] : p(X,Y,Z)"), "a");
  EXPECT_EQ(rendered(cs), (std::vector<std::string>{"p(X,Y,sk_a_0(X,Y))"}));
  // Reused variable names stay distinct.
  auto two = clausify(parse_fol("(! [X] : p(X)) & (! [X] : ? [Y] : q(X,Y))"), "b");
  EXPECT_EQ(rendered(two), (std::vector<std::string>{"p(X)", "q(X_1,sk_b_0(X_1))"}));
}

TEST(Clausify, TautologiesAndDuplicatesRemoved) {
  EXPECT_TRUE(clausify(parse_fol("! [X] : (p(X) => p(X))"), "t").empty());
  auto cs = clausify(parse_fol("p(a) | p(a)"), "d");
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].head.size(), 1u);
}

TEST(Clausify, RejectsFreeVariablesAndBlowup) {
  EXPECT_EQ(kind_of([] { clausify(parse_fol("p(X)"), "f"); }), ErrorKind::unsupported_fragment);
  std::string big = "(a1 & b1)";
  for (int i = 2; i <= 9; ++i) {
    big = "(" + big + " | (a" + std::to_string(i) + " & b" + std::to_string(i) + "))";
  }
  EXPECT_EQ(kind_of([&] { clausify(parse_fol(big), "x"); }), ErrorKind::unsupported_fragment);
}

// Clauses mention only symbols of the source formula and fresh Skolems.
TEST(Clausify, PreservesSymbolsOnRandomFormulas) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = test::random_formula(rng, 3);
    if (!is_closed(f)) continue;
    std::vector<Clause> cs;
    try {
      cs = clausify(f, "r");
    } catch (const Error&) {
      continue;
    }
    std::set<std::string> got;
    for (const auto& c : cs) {
      for (const auto& a : c.body) collect_symbols(a, got);
      for (const auto& a : c.head) collect_symbols(a, got);
    }
    std::set<std::string> src = symbols(f);
    for (const auto& s : got) {
      if (!s.starts_with("sk_r_")) EXPECT_TRUE(src.contains(s)) << s;
    }
    ++checked;
  }
  EXPECT_GT(checked, 50);
}
