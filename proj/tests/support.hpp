// Fixtures and independent oracles shared by the unit and acceptance tests.
#ifndef CORG_TESTS_SUPPORT_HPP
#define CORG_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <set>
#include <string>
#include <vector>

#include "corg/corg.hpp"

namespace corg::test {

inline std::string data(const std::string& name) { return std::string(CORG_TEST_DATA) + "/" + name; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("corg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// The kind of the Error thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<ErrorKind> kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline Triple triple(const std::string& s, const std::string& r, const std::string& o, bool negated = false) {
  Triple t;
  t.subject = ConceptId(s);
  t.relation = RelationId(r);
  t.object = ConceptId(o);
  t.negated = negated;
  return t;
}

// The four-triple sun/shadow/grass graph.
inline std::vector<Triple> fig3_triples() {
  return {triple("sun", "causes", "light"), triple("shadow", "at_location", "light"),
          triple("shadow", "at_location", "ground"), triple("grass", "at_location", "ground")};
}

inline fol::Atom atom(const std::string& p, std::vector<std::string> args) {
  fol::Atom a{p, {}};
  for (auto& x : args) {
    bool var = !x.empty() && std::isupper(static_cast<unsigned char>(x[0]));
    a.args.push_back(var ? fol::Term::variable(x) : fol::Term::constant(x));
  }
  return a;
}

inline fol::Clause rule(std::vector<fol::Atom> body, fol::Atom head, std::string origin = "r") {
  return fol::Clause{std::move(body), {std::move(head)}, std::move(origin)};
}

// ---- random Horn fixtures and a grounding fixpoint oracle --------------------

struct HornFixture {
  std::vector<fol::Atom> facts;
  std::vector<fol::Clause> clauses;
  std::vector<std::string> constants;
};

// Function-free and range-restricted, so saturation always terminates.
// Symbols: at most 4 predicates plus 2 constants.
inline HornFixture random_horn(std::mt19937& rng) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<std::string> preds{"p", "q", "r", "s"};
  const std::vector<std::size_t> arity{1, 1, 2, 2};
  const std::vector<std::string> consts{"a", "b"};
  const std::vector<std::string> vars{"X", "Y", "Z"};
  HornFixture fx;
  fx.constants = consts;

  std::size_t nfacts = 1 + pick(4);
  for (std::size_t i = 0; i < nfacts; ++i) {
    std::size_t p = pick(preds.size());
    std::vector<std::string> args;
    for (std::size_t k = 0; k < arity[p]; ++k) args.push_back(consts[pick(2)]);
    fx.facts.push_back(atom(preds[p], args));
  }
  std::size_t nclauses = 1 + pick(20);
  for (std::size_t c = 0; c < nclauses; ++c) {
    std::vector<fol::Atom> body;
    std::set<std::string> seen;
    std::size_t len = 1 + pick(3);
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t p = pick(preds.size());
      std::vector<std::string> args;
      for (std::size_t k = 0; k < arity[p]; ++k) {
        std::string t = pick(5) == 0 ? consts[pick(2)] : vars[pick(3)];
        if (std::isupper(static_cast<unsigned char>(t[0]))) seen.insert(t);
        args.push_back(t);
      }
      body.push_back(atom(preds[p], args));
    }
    std::vector<std::string> pool(seen.begin(), seen.end());
    pool.insert(pool.end(), consts.begin(), consts.end());
    std::size_t p = pick(preds.size());
    std::vector<std::string> args;
    for (std::size_t k = 0; k < arity[p]; ++k) args.push_back(pool[pick(pool.size())]);
    fx.clauses.push_back(rule(std::move(body), atom(preds[p], args), "c" + std::to_string(c)));
  }
  return fx;
}

// Least fixpoint by brute-force grounding: every clause is instantiated with
// every assignment of constants to its variables until nothing changes.
inline std::set<fol::Atom> naive_fixpoint(const HornFixture& fx) {
  std::set<fol::Atom> model(fx.facts.begin(), fx.facts.end());
  auto ground = [](const fol::Atom& a, const std::map<std::string, std::string>& s) {
    fol::Atom g{a.predicate, {}};
    for (const auto& t : a.args) {
      g.args.push_back(t.is_variable() ? fol::Term::constant(s.at(t.name)) : t);
    }
    return g;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : fx.clauses) {
      std::set<std::string> vs;
      for (const auto& a : c.body) {
        for (const auto& t : a.args) {
          if (t.is_variable()) vs.insert(t.name);
        }
      }
      std::vector<std::string> vars(vs.begin(), vs.end());
      std::size_t combos = 1;
      for (std::size_t i = 0; i < vars.size(); ++i) combos *= fx.constants.size();
      for (std::size_t n = 0; n < combos; ++n) {
        std::map<std::string, std::string> s;
        std::size_t k = n;
        for (const auto& v : vars) {
          s[v] = fx.constants[k % fx.constants.size()];
          k /= fx.constants.size();
        }
        bool fires = std::all_of(c.body.begin(), c.body.end(),
                                 [&](const fol::Atom& a) { return model.contains(ground(a, s)); });
        if (fires && model.insert(ground(c.head[0], s)).second) changed = true;
      }
    }
  }
  return model;
}

// ---- random axiom sets and the reachable-closure oracle ----------------------

// Each axiom is  ! [X] : (a(X) => (b(X) & c(X)))  over a small vocabulary
// with a skewed symbol distribution, so that occurrence counts differ.
inline std::vector<fol::Formula> random_axioms(std::mt19937& rng, std::size_t n, std::size_t vocabulary) {
  std::vector<double> weights;
  for (std::size_t i = 0; i < vocabulary; ++i) weights.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> sym(weights.begin(), weights.end());
  auto name = [&] { return "w" + std::to_string(sym(rng)); };
  auto x = fol::Term::variable("X");
  std::vector<fol::Formula> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto a = fol::Formula::make_atom({name(), {x}});
    auto b = fol::Formula::make_atom({name(), {x}});
    auto c = fol::Formula::make_atom({name(), {x}});
    out.push_back(fol::Formula::forall(
        "X", fol::Formula::implication(a, fol::Formula::conjunction(b, c))));
  }
  return out;
}

// Axioms reachable from the goals through shared symbols.
inline std::set<std::size_t> reachable_closure(std::span<const fol::Formula> axioms,
                                               const std::set<std::string>& goals) {
  std::set<std::string> reached = goals;
  std::set<std::size_t> chosen;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < axioms.size(); ++i) {
      if (chosen.contains(i)) continue;
      auto syms = fol::symbols(axioms[i]);
      bool touches = std::any_of(syms.begin(), syms.end(), [&](const std::string& s) { return reached.contains(s); });
      if (!touches) continue;
      chosen.insert(i);
      reached.insert(syms.begin(), syms.end());
      changed = true;
    }
  }
  return chosen;
}

// ---- random formulas for printer/parser round trips --------------------------

inline fol::Formula random_formula(std::mt19937& rng, std::size_t depth = 4) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<std::string> preds{"p", "q", "atlocation", "inv_causes", "r1Actor", "Odd", "two words"};
  const std::vector<std::string> funcs{"f", "sk_t1_0", "g"};
  const std::vector<std::string> consts{"c0", "sun", "a_b", "Big"};
  std::vector<std::string> scope;

  std::function<fol::Term(std::size_t)> term = [&](std::size_t d) -> fol::Term {
    std::size_t k = pick(3);
    if (k == 0 && !scope.empty()) return fol::Term::variable(scope[pick(scope.size())]);
    if (k == 1 && d > 0) {
      std::vector<fol::Term> args;
      for (std::size_t i = 0, n = 1 + pick(2); i < n; ++i) args.push_back(term(d - 1));
      return fol::Term::function(funcs[pick(funcs.size())], std::move(args));
    }
    return fol::Term::constant(consts[pick(consts.size())]);
  };
  std::function<fol::Formula(std::size_t)> formula = [&](std::size_t d) -> fol::Formula {
    std::size_t k = d == 0 ? 0 : pick(7);
    switch (k) {
      case 1: return fol::Formula::negation(formula(d - 1));
      case 2: return fol::Formula::conjunction(formula(d - 1), formula(d - 1));
      case 3: return fol::Formula::disjunction(formula(d - 1), formula(d - 1));
      case 4: return fol::Formula::implication(formula(d - 1), formula(d - 1));
      case 5:
      case 6: {
        std::string v = std::string(1, static_cast<char>('X' + pick(3)));
        scope.push_back(v);
        fol::Formula body = formula(d - 1);
        scope.pop_back();
        return k == 5 ? fol::Formula::forall(v, std::move(body)) : fol::Formula::exists(v, std::move(body));
      }
      default: {
        fol::Atom a{preds[pick(preds.size())], {}};
        for (std::size_t i = 0, n = pick(3); i < n; ++i) a.args.push_back(term(2));
        return fol::Formula::make_atom(std::move(a));
      }
    }
  };
  return formula(depth);
}

inline bool round_trips(const fol::Formula& f) {
  auto parsed = fol::parse_tptp(fol::to_tptp(f, "f"));
  return parsed.size() == 1 && parsed[0].formula == f;
}

// ---- synthetic resources for scale runs --------------------------------------

struct SyntheticCorpus {
  std::string dump_path;
  std::string table_path;
  std::vector<CopaProblem> problems;
};

inline SyntheticCorpus write_synthetic_corpus(const std::filesystem::path& dir, std::size_t triples,
                                              std::size_t words, std::size_t problems,
                                              std::size_t dimension, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<double> weights;
  for (std::size_t i = 0; i < words; ++i) weights.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> zipf(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> uniform(0, words - 1);
  auto word = [](std::size_t i) { return "w" + std::to_string(i); };
  const std::vector<std::string> camel{"IsA", "PartOf", "CapableOf", "Desires", "Causes", "AtLocation",
                                       "HasSubevent", "UsedFor", "HasProperty", "HasPrerequisite",
                                       "MotivatedByGoal", "ReceivesAction", "MadeOf", "Antonym"};

  SyntheticCorpus c;
  c.dump_path = (dir / "assertions.csv").string();
  c.table_path = (dir / "vectors.txt").string();
  {
    std::string out;
    for (std::size_t i = 0; i < triples; ++i) {
      std::string s = word(uniform(rng));
      std::string o = word(zipf(rng));
      const std::string& r = camel[i % camel.size()];
      out += "/a/[/r/" + r + "/,/c/en/" + s + "/,/c/en/" + o + "/]\t/r/" + r + "\t/c/en/" + s +
             "\t/c/en/" + o + "\t{\"weight\": 1.0}\n";
    }
    io::write_file(c.dump_path, out);
  }
  {
    std::normal_distribution<double> g(0.0, 1.0);
    std::string out = std::to_string(words) + " " + std::to_string(dimension) + "\n";
    char buf[32];
    for (std::size_t i = 0; i < words; ++i) {
      out += word(i);
      for (std::size_t k = 0; k < dimension; ++k) {
        std::snprintf(buf, sizeof buf, " %.4f", g(rng));
        out += buf;
      }
      out.push_back('\n');
    }
    io::write_file(c.table_path, out);
  }
  auto sentence = [&] {
    std::string s = "The";
    for (int k = 0; k < 3; ++k) s += " " + word(zipf(rng) % 2000);
    return s + ".";
  };
  for (std::size_t i = 0; i < problems; ++i) {
    CopaProblem p;
    p.id = static_cast<long long>(i + 1);
    p.premise = sentence();
    p.question = i % 2 ? Question::effect : Question::cause;
    p.alternatives = {sentence(), sentence()};
    p.gold = i % 2;
    c.problems.push_back(std::move(p));
  }
  return c;
}

}  // namespace corg::test

#endif  // CORG_TESTS_SUPPORT_HPP
