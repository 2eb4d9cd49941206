#include <gtest/gtest.h>

#include "support.hpp"

using namespace corg;
using test::atom;
using test::kind_of;
using test::rule;

namespace {

std::vector<std::string> rendered(const PartialModel& m) {
  std::vector<std::string> out;
  for (const auto& a : m.atoms()) out.push_back(fol::to_string(a));
  return out;
}

std::vector<fol::Clause> fig3_clauses(bool inverse) {
  auto tr = translate_triples(test::fig3_triples(), {}, Scheme::existential, inverse);
  std::vector<fol::Clause> out;
  for (const auto& a : tr.axioms) {
    auto cs = fol::clausify(a.formula, a.id);
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

bool has_predicate(const PartialModel& m, const std::string& p) {
  for (const auto& a : m.atoms()) {
    if (a.predicate == p) return true;
  }
  return false;
}

}  // namespace

TEST(Saturate, ChainInTraceOrder) {
  std::vector<GroundAtom> facts{atom("p", {"a"})};
  std::vector<fol::Clause> cs{rule({atom("p", {"X"})}, atom("q", {"X"}), "r1"),
                              rule({atom("q", {"X"})}, atom("r", {"X"}), "r2")};
  auto m = saturate(facts, cs);
  EXPECT_EQ(rendered(m), (std::vector<std::string>{"p(a)", "q(a)", "r(a)"}));
  EXPECT_TRUE(m.complete());
  EXPECT_EQ(m.input_count(), 1u);
  EXPECT_EQ(m.trace()[2].clause_origin, "r2");
  EXPECT_EQ(m.trace()[2].premises, (std::vector<std::size_t>{1}));
  EXPECT_TRUE(m.trace()[0].is_input());
}

TEST(Saturate, JoinsShareVariables) {
  std::vector<GroundAtom> facts{atom("e", {"a", "b"}), atom("e", {"b", "c"}), atom("e", {"c", "d"})};
  std::vector<fol::Clause> cs{rule({atom("e", {"X", "Y"})}, atom("t", {"X", "Y"})),
                              rule({atom("t", {"X", "Y"}), atom("e", {"Y", "Z"})}, atom("t", {"X", "Z"}))};
  auto m = saturate(facts, cs);
  std::set<std::string> ts;
  for (const auto& a : m.atoms()) {
    if (a.predicate == "t") ts.insert(fol::to_string(a));
  }
  EXPECT_EQ(ts, (std::set<std::string>{"t(a,b)", "t(b,c)", "t(c,d)", "t(a,c)", "t(b,d)", "t(a,d)"}));
  EXPECT_TRUE(m.complete());
}

TEST(Saturate, RepeatedVariableMustMatch) {
  std::vector<GroundAtom> facts{atom("e", {"a", "a"}), atom("e", {"a", "b"})};
  auto m = saturate(facts, std::vector<fol::Clause>{rule({atom("e", {"X", "X"})}, atom("loop", {"X"}))});
  EXPECT_EQ(rendered(m), (std::vector<std::string>{"e(a,a)", "e(a,b)", "loop(a)"}));
}

TEST(Saturate, TermDepthBoundMakesModelPartial) {
  fol::Atom head{"p", {fol::Term::function("f", {fol::Term::variable("X")})}};
  std::vector<fol::Clause> cs{rule({atom("p", {"X"})}, head, "grow")};
  auto m = saturate(std::vector<GroundAtom>{atom("p", {"c"})}, cs, BuilderConfig{3, 1000, 100});
  EXPECT_EQ(rendered(m), (std::vector<std::string>{"p(c)", "p(f(c))", "p(f(f(c)))"}));
  EXPECT_FALSE(m.complete());
  EXPECT_GE(m.suppressed_by_depth(), 1u);
}

TEST(Saturate, AtomBudgetMakesModelPartial) {
  std::vector<GroundAtom> facts{atom("p", {"a"}), atom("p", {"b"})};
  std::vector<fol::Clause> cs{rule({atom("p", {"X"})}, atom("q", {"X"}))};
  auto m = saturate(facts, cs, BuilderConfig{3, 3, 100});
  EXPECT_EQ(m.size(), 3u);
  EXPECT_FALSE(m.complete());
}

TEST(Saturate, RoundBoundProbesForMoreWork) {
  std::vector<GroundAtom> facts{atom("p", {"a"})};
  std::vector<fol::Clause> one{rule({atom("p", {"X"})}, atom("q", {"X"}))};
  EXPECT_TRUE(saturate(facts, one, BuilderConfig{3, 100, 1}).complete());
  std::vector<fol::Clause> two = one;
  two.push_back(rule({atom("q", {"X"})}, atom("r", {"X"})));
  auto m = saturate(facts, two, BuilderConfig{3, 100, 1});
  EXPECT_FALSE(m.complete());
  EXPECT_EQ(m.size(), 2u);
}

TEST(Saturate, RejectsWhatItCannotRun) {
  std::vector<GroundAtom> facts{atom("p", {"a"})};
  fol::Clause non_horn{{atom("p", {"X"})}, {atom("q", {"X"}), atom("r", {"X"})}, "d"};
  EXPECT_EQ(kind_of([&] { saturate(facts, std::vector<fol::Clause>{non_horn}); }), ErrorKind::non_horn_clause);
  fol::Clause unsafe = rule({atom("p", {"X"})}, atom("q", {"Y"}));
  EXPECT_EQ(kind_of([&] { saturate(facts, std::vector<fol::Clause>{unsafe}); }),
            ErrorKind::non_range_restricted_clause);
  EXPECT_EQ(kind_of([&] { saturate(std::vector<GroundAtom>{atom("p", {"X"})}, {}); }), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of([&] { saturate(facts, {}, BuilderConfig{0, 1, 1}); }), ErrorKind::invalid_config);
}

TEST(Saturate, FactClausesFireAndHeadlessClausesDoNot) {
  std::vector<fol::Clause> cs{fol::Clause{{}, {atom("q", {"a"})}, "fact"},
                              fol::Clause{{atom("q", {"X"})}, {}, "goal"}};
  auto m = saturate(std::vector<GroundAtom>{}, cs);
  EXPECT_EQ(rendered(m), (std::vector<std::string>{"q(a)"}));
  EXPECT_TRUE(m.complete());
}

TEST(Saturate, DuplicateInputFactsCollapse) {
  auto m = saturate(std::vector<GroundAtom>{atom("p", {"a"}), atom("p", {"a"})}, {});
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.input_count(), 1u);
}

TEST(Saturate, MatchesGroundingOracleOnRandomFixtures) {
  std::mt19937 rng(1234);
  for (int i = 0; i < 60; ++i) {
    auto fx = test::random_horn(rng);
    auto m = saturate(fx.facts, fx.clauses, BuilderConfig{10, 100000, 1000});
    ASSERT_TRUE(m.complete());
    auto atoms = m.atoms();
    std::set<fol::Atom> got(atoms.begin(), atoms.end());
    EXPECT_EQ(got.size(), atoms.size());
    EXPECT_EQ(got, test::naive_fixpoint(fx)) << "fixture " << i;
    for (std::size_t k = 0; k < m.size(); ++k) {
      for (std::size_t p : m.trace()[k].premises) EXPECT_LT(p, k);
    }
  }
}

TEST(Saturate, Deterministic) {
  std::mt19937 rng(99);
  for (int i = 0; i < 10; ++i) {
    auto fx = test::random_horn(rng);
    auto a = saturate(fx.facts, fx.clauses);
    auto b = saturate(fx.facts, fx.clauses);
    EXPECT_EQ(a.trace(), b.trace());
  }
}

TEST(DirectionFix, ShadowOnlyReachableThroughInverseAxioms) {
  std::vector<GroundAtom> facts{atom("sun", {"c"})};
  auto plain = saturate(facts, fig3_clauses(false));
  EXPECT_TRUE(has_predicate(plain, "light"));
  EXPECT_FALSE(has_predicate(plain, "shadow"));
  auto inv = saturate(facts, fig3_clauses(true));
  EXPECT_TRUE(has_predicate(inv, "shadow"));
  EXPECT_TRUE(inv.contains(fol::parse_fol("shadow(sk_i2_0(sk_t1_0(c)))").atom));
}

TEST(Extract, DropsRelationsSkolemsAndIgnored) {
  auto m = saturate(std::vector<GroundAtom>{atom("sun", {"c0"})}, fig3_clauses(true));
  ExtractionConfig cfg{true, true, {"c0"}};
  EXPECT_EQ(extract_symbols(m, cfg), (std::vector<std::string>{"sun", "light", "shadow"}));
  ExtractionConfig keep{false, false, {}};
  auto all = extract_symbols(m, keep);
  EXPECT_NE(std::find(all.begin(), all.end(), "causes"), all.end());
  EXPECT_NE(std::find(all.begin(), all.end(), "sk_t1_0"), all.end());
  EXPECT_NE(std::find(all.begin(), all.end(), "c0"), all.end());
}

TEST(Extract, RolePredicates) {
  EXPECT_TRUE(is_role_predicate("r1Actor"));
  EXPECT_TRUE(is_role_predicate("r12Theme"));
  EXPECT_FALSE(is_role_predicate("rise"));
  EXPECT_FALSE(is_role_predicate("r1"));
  EXPECT_FALSE(is_role_predicate("r1actor"));
  EXPECT_TRUE(is_relation_predicate(atom("inv_causes", {"a"})));
  EXPECT_TRUE(is_relation_predicate(atom("causes", {"a", "b"})));
  EXPECT_FALSE(is_relation_predicate(atom("sun", {"a"})));
}

TEST(Explain, RendersDerivationTree) {
  auto m = saturate(std::vector<GroundAtom>{atom("sun", {"c"})}, fig3_clauses(false));
  std::string e = explain(m, fol::parse_fol("light(sk_t1_0(c))").atom);
  EXPECT_EQ(e, "light(sk_t1_0(c))  [#2] by t1\n  sun(c)  [#0] input\n");
  EXPECT_EQ(explain(m, atom("sun", {"c"})), "sun(c)  [#0] input\n");
  EXPECT_EQ(kind_of([&] { explain(m, atom("moon", {"c"})); }), ErrorKind::atom_not_in_model);
}

TEST(Explain, SharedStepsExpandOnce) {
  std::vector<GroundAtom> facts{atom("p", {"a"})};
  std::vector<fol::Clause> cs{rule({atom("p", {"X"})}, atom("q", {"X"}), "r1"),
                              rule({atom("q", {"X"}), atom("q", {"X"})}, atom("s", {"X"}), "r2")};
  std::string e = explain(saturate(facts, cs), atom("s", {"a"}));
  EXPECT_EQ(e,
            "s(a)  [#2] by r2\n"
            "  q(a)  [#1] by r1\n"
            "    p(a)  [#0] input\n"
            "  q(a)  [#1] by r1 (see above)\n");
}

TEST(Export, ModelAsTptpRoundTrips) {
  auto m = saturate(std::vector<GroundAtom>{atom("sun", {"c"})}, fig3_clauses(true));
  auto parsed = fol::parse_tptp(model_to_tptp(m));
  ASSERT_EQ(parsed.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(parsed[i].name, "m" + std::to_string(i));
    EXPECT_EQ(parsed[i].formula.atom, m.atom(i));
  }
  auto j = trace_to_json(m);
  ASSERT_EQ(j.size(), m.size());
  EXPECT_TRUE(j[0]["clause"].is_null());
  EXPECT_EQ(j[1]["clause"], "t1");
}
