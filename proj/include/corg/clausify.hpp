#ifndef CORG_CLAUSIFY_HPP
#define CORG_CLAUSIFY_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corg/error.hpp"
#include "corg/fol.hpp"

namespace corg::fol {

// body -> head. Clauses that come out of the triple translators are Horn
// (head.size() <= 1) and range-restricted.
struct Clause {
  std::vector<Atom> body;
  std::vector<Atom> head;
  std::string origin;

  bool is_horn() const noexcept { return head.size() <= 1; }
  bool is_fact() const noexcept { return body.empty() && head.size() == 1 && head[0].is_ground(); }

  bool is_range_restricted() const {
    std::set<std::string> body_vars;
    for (const auto& a : body) collect_vars(a, body_vars);
    std::set<std::string> head_vars;
    for (const auto& a : head) collect_vars(a, head_vars);
    return std::includes(body_vars.begin(), body_vars.end(), head_vars.begin(), head_vars.end());
  }

  static void collect_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) {
      out.insert(t.name);
      return;
    }
    for (const auto& a : t.args) collect_vars(a, out);
  }
  static void collect_vars(const Atom& a, std::set<std::string>& out) {
    for (const auto& t : a.args) collect_vars(t, out);
  }

  bool operator==(const Clause&) const = default;
};

inline std::string skolem_name(std::string_view axiom_id, std::size_t index) {
  return "sk_" + std::string(axiom_id) + "_" + std::to_string(index);
}

// Human-readable: "sun(X) -> causes(X,sk_t1_0(X))". Facts print as the atom.
inline std::string to_string(const Clause& c) {
  std::string out;
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    if (i > 0) out += " & ";
    print(c.body[i], out);
  }
  if (!c.body.empty()) out += " -> ";
  if (c.head.empty()) {
    out += "false";
  } else {
    for (std::size_t i = 0; i < c.head.size(); ++i) {
      if (i > 0) out += " | ";
      print(c.head[i], out);
    }
  }
  return out;
}

namespace detail {

struct Literal {
  bool positive = true;
  Atom atom;
  auto operator<=>(const Literal&) const = default;
};

inline Formula to_nnf(const Formula& f, bool negate) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::atom:
      return negate ? Formula::negation(f) : f;
    case K::negation:
      return to_nnf(f.children[0], !negate);
    case K::conjunction:
    case K::disjunction: {
      Formula l = to_nnf(f.children[0], negate);
      Formula r = to_nnf(f.children[1], negate);
      bool conj = (f.kind == K::conjunction) != negate;
      return conj ? Formula::conjunction(std::move(l), std::move(r))
                  : Formula::disjunction(std::move(l), std::move(r));
    }
    case K::implication: {
      // a => b  ==  ~a | b
      Formula l = to_nnf(f.children[0], !negate);
      Formula r = to_nnf(f.children[1], negate);
      return negate ? Formula::conjunction(std::move(l), std::move(r))
                    : Formula::disjunction(std::move(l), std::move(r));
    }
    case K::forall:
    case K::exists: {
      bool universal = (f.kind == K::forall) != negate;
      Formula body = to_nnf(f.children[0], negate);
      return universal ? Formula::forall(f.variable, std::move(body))
                       : Formula::exists(f.variable, std::move(body));
    }
  }
  return f;
}

class Skolemizer {
 public:
  explicit Skolemizer(std::string axiom_id) : axiom_id_(std::move(axiom_id)) {}

  // Input is in NNF; output is quantifier-free with universals left as
  // (possibly renamed) free variables.
  Formula run(const Formula& f) { return walk(f); }

 private:
  Term substitute(const Term& t) const {
    if (t.is_variable()) {
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
        if (it->first == t.name) return it->second;
      }
      return t;
    }
    Term out = t;
    for (auto& a : out.args) a = substitute(a);
    return out;
  }

  Formula walk(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::atom: {
        Formula out = f;
        for (auto& t : out.atom.args) t = substitute(t);
        return out;
      }
      case K::negation:
        return Formula::negation(walk(f.children[0]));
      case K::conjunction: {
        Formula l = walk(f.children[0]);
        return Formula::conjunction(std::move(l), walk(f.children[1]));
      }
      case K::disjunction: {
        Formula l = walk(f.children[0]);
        return Formula::disjunction(std::move(l), walk(f.children[1]));
      }
      case K::forall: {
        std::string name = f.variable;
        // A second quantifier over an already used name gets a fresh suffix
        // so that distinct universals never merge after prenexing.
        if (!used_universals_.insert(name).second) {
          std::size_t n = 1;
          while (!used_universals_.insert(f.variable + "_" + std::to_string(n)).second) ++n;
          name = f.variable + "_" + std::to_string(n);
        }
        Term v = Term::variable(name);
        universals_.push_back(v);
        scope_.emplace_back(f.variable, v);
        Formula body = walk(f.children[0]);
        scope_.pop_back();
        universals_.pop_back();
        return body;
      }
      case K::exists: {
        Term sk = Term::function(skolem_name(axiom_id_, next_++), universals_);
        scope_.emplace_back(f.variable, std::move(sk));
        Formula body = walk(f.children[0]);
        scope_.pop_back();
        return body;
      }
      case K::implication:
        break;
    }
    throw Error(ErrorKind::unsupported_fragment, "implication survived NNF conversion");
  }

  std::string axiom_id_;
  std::size_t next_ = 0;
  std::vector<Term> universals_;
  std::vector<std::pair<std::string, Term>> scope_;
  std::set<std::string> used_universals_;
};

using ClauseLits = std::vector<Literal>;

constexpr std::size_t kMaxClausesPerFormula = 256;

inline std::vector<ClauseLits> to_cnf(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::atom:
      return {{Literal{true, f.atom}}};
    case K::negation:
      if (f.children[0].kind != K::atom) {
        throw Error(ErrorKind::unsupported_fragment, "negation of a non-atom after NNF");
      }
      return {{Literal{false, f.children[0].atom}}};
    case K::conjunction: {
      auto l = to_cnf(f.children[0]);
      auto r = to_cnf(f.children[1]);
      l.insert(l.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
      if (l.size() > kMaxClausesPerFormula) {
        throw Error(ErrorKind::unsupported_fragment, "clause set too large");
      }
      return l;
    }
    case K::disjunction: {
      auto l = to_cnf(f.children[0]);
      auto r = to_cnf(f.children[1]);
      if (l.size() * r.size() > kMaxClausesPerFormula) {
        throw Error(ErrorKind::unsupported_fragment,
                    "disjunction distributes into more than " +
                        std::to_string(kMaxClausesPerFormula) + " clauses");
      }
      std::vector<ClauseLits> out;
      out.reserve(l.size() * r.size());
      for (const auto& a : l) {
        for (const auto& b : r) {
          ClauseLits c = a;
          c.insert(c.end(), b.begin(), b.end());
          out.push_back(std::move(c));
        }
      }
      return out;
    }
    default:
      break;
  }
  throw Error(ErrorKind::unsupported_fragment, "quantifier or implication after Skolemization");
}

}  // namespace detail

// NNF, Skolemization (symbols sk_<axiom_id>_<k>, k counting existentials
// left to right), then distribution into clauses. Duplicate literals are
// merged and tautologies dropped; clause order follows the formula.
inline std::vector<Clause> clausify(const Formula& f, const std::string& axiom_id) {
  if (!is_closed(f)) {
    std::string vars;
    for (const auto& v : free_variables(f)) vars += (vars.empty() ? "" : ",") + v;
    throw Error(ErrorKind::unsupported_fragment,
                "axiom " + axiom_id + " has free variables: " + vars);
  }
  Formula nnf = detail::to_nnf(f, false);
  Formula matrix = detail::Skolemizer(axiom_id).run(nnf);
  std::vector<Clause> out;
  for (auto& lits : detail::to_cnf(matrix)) {
    std::vector<detail::Literal> unique;
    for (auto& l : lits) {
      if (std::find(unique.begin(), unique.end(), l) == unique.end()) unique.push_back(std::move(l));
    }
    bool tautology = false;
    for (const auto& l : unique) {
      for (const auto& m : unique) {
        if (l.positive && !m.positive && l.atom == m.atom) tautology = true;
      }
    }
    if (tautology) continue;
    Clause c;
    c.origin = axiom_id;
    for (auto& l : unique) (l.positive ? c.head : c.body).push_back(std::move(l.atom));
    out.push_back(std::move(c));
  }
  return out;
}

// Reads a TPTP cnf disjunction (implicitly universally closed) back into a
// clause; anything other than a disjunction of literals is rejected.
inline Clause clause_from_disjunction(const Formula& f, std::string origin) {
  Clause c;
  c.origin = std::move(origin);
  std::vector<const Formula*> stack{&f};
  std::vector<const Formula*> lits;
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    if (g->kind == Formula::Kind::disjunction) {
      stack.push_back(&g->children[1]);
      stack.push_back(&g->children[0]);
    } else {
      lits.push_back(g);
    }
  }
  for (const Formula* g : lits) {
    if (g->kind == Formula::Kind::atom) {
      c.head.push_back(g->atom);
    } else if (g->kind == Formula::Kind::negation &&
               g->children[0].kind == Formula::Kind::atom) {
      c.body.push_back(g->children[0].atom);
    } else {
      throw Error(ErrorKind::unsupported_fragment, "cnf formula is not a disjunction of literals");
    }
  }
  return c;
}

}  // namespace corg::fol

#endif  // CORG_CLAUSIFY_HPP
