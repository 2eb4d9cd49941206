#ifndef CORG_FOL_HPP
#define CORG_FOL_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corg/error.hpp"

namespace corg::fol {

struct Term {
  enum class Kind { variable, constant, function };

  Kind kind = Kind::constant;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string n) { return Term{Kind::variable, std::move(n), {}}; }
  static Term constant(std::string n) { return Term{Kind::constant, std::move(n), {}}; }
  static Term function(std::string n, std::vector<Term> a) {
    if (a.empty()) return constant(std::move(n));
    return Term{Kind::function, std::move(n), std::move(a)};
  }

  bool is_variable() const noexcept { return kind == Kind::variable; }
  bool is_constant() const noexcept { return kind == Kind::constant; }

  bool is_ground() const {
    if (kind == Kind::variable) return false;
    for (const auto& a : args) {
      if (!a.is_ground()) return false;
    }
    return true;
  }

  // Constants and variables have depth 1.
  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& a : args) d = std::max(d, a.depth());
    return d + 1;
  }

  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b);
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const noexcept { return args.size(); }

  bool is_ground() const {
    for (const auto& a : args) {
      if (!a.is_ground()) return false;
    }
    return true;
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& a : args) d = std::max(d, a.depth());
    return d;
  }

  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
  friend bool operator==(const Atom& a, const Atom& b);
};

inline std::strong_ordering compare_args(const std::vector<Term>& a, const std::vector<Term>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end(),
                                                [](const Term& x, const Term& y) { return x <=> y; });
}

inline std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  return compare_args(a.args, b.args);
}
inline bool operator==(const Term& a, const Term& b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

inline std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return compare_args(a.args, b.args);
}
inline bool operator==(const Atom& a, const Atom& b) { return a.predicate == b.predicate && a.args == b.args; }

struct Formula {
  enum class Kind { atom, negation, conjunction, disjunction, implication, forall, exists };

  Kind kind = Kind::atom;
  Atom atom;             // Kind::atom
  std::string variable;  // quantifiers
  std::vector<Formula> children;

  static Formula make_atom(Atom a) {
    Formula f;
    f.atom = std::move(a);
    return f;
  }
  static Formula make_atom(std::string predicate, std::vector<Term> args) {
    return make_atom(Atom{std::move(predicate), std::move(args)});
  }
  static Formula negation(Formula body) { return unary(Kind::negation, std::move(body)); }
  static Formula conjunction(Formula l, Formula r) {
    return binary(Kind::conjunction, std::move(l), std::move(r));
  }
  static Formula disjunction(Formula l, Formula r) {
    return binary(Kind::disjunction, std::move(l), std::move(r));
  }
  static Formula implication(Formula l, Formula r) {
    return binary(Kind::implication, std::move(l), std::move(r));
  }
  static Formula forall(std::string var, Formula body) {
    Formula f = unary(Kind::forall, std::move(body));
    f.variable = std::move(var);
    return f;
  }
  static Formula exists(std::string var, Formula body) {
    Formula f = unary(Kind::exists, std::move(body));
    f.variable = std::move(var);
    return f;
  }

  bool is_quantifier() const noexcept { return kind == Kind::forall || kind == Kind::exists; }
  bool is_binary() const noexcept {
    return kind == Kind::conjunction || kind == Kind::disjunction || kind == Kind::implication;
  }

  bool operator==(const Formula&) const = default;

 private:
  static Formula unary(Kind k, Formula body) {
    Formula f;
    f.kind = k;
    f.children.push_back(std::move(body));
    return f;
  }
  static Formula binary(Kind k, Formula l, Formula r) {
    Formula f;
    f.kind = k;
    f.children.reserve(2);
    f.children.push_back(std::move(l));
    f.children.push_back(std::move(r));
    return f;
  }
};

// ---- symbol queries -------------------------------------------------------

inline void collect_term_symbols(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) return;
  out.insert(t.name);
  for (const auto& a : t.args) collect_term_symbols(a, out);
}

inline void collect_symbols(const Atom& a, std::set<std::string>& out) {
  out.insert(a.predicate);
  for (const auto& t : a.args) collect_term_symbols(t, out);
}

inline void collect_symbols(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::atom) {
    collect_symbols(f.atom, out);
    return;
  }
  for (const auto& c : f.children) collect_symbols(c, out);
}

// Predicate, function and constant names (never variables), sorted.
inline std::set<std::string> symbols(const Formula& f) {
  std::set<std::string> out;
  collect_symbols(f, out);
  return out;
}

namespace detail {

inline void free_vars(const Term& t, const std::vector<std::string>& bound,
                      std::set<std::string>& out) {
  if (t.is_variable()) {
    if (std::find(bound.begin(), bound.end(), t.name) == bound.end()) out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) free_vars(a, bound, out);
}

inline void free_vars(const Formula& f, std::vector<std::string>& bound,
                      std::set<std::string>& out) {
  if (f.kind == Formula::Kind::atom) {
    for (const auto& t : f.atom.args) free_vars(t, bound, out);
    return;
  }
  if (f.is_quantifier()) {
    bound.push_back(f.variable);
    free_vars(f.children.front(), bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : f.children) free_vars(c, bound, out);
}

}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  detail::free_vars(f, bound, out);
  return out;
}

inline bool is_closed(const Formula& f) { return free_variables(f).empty(); }

// Predicates and functions live in separate namespaces; within each, a
// name must keep one arity across everything registered.
class ArityTable {
 public:
  void add(const Formula& f) {
    if (f.kind == Formula::Kind::atom) {
      add(f.atom);
      return;
    }
    for (const auto& c : f.children) add(c);
  }

  void add(const Atom& a) {
    check(predicates_, a.predicate, a.arity(), "predicate");
    for (const auto& t : a.args) add(t);
  }

  void add(const Term& t) {
    if (t.is_variable()) return;
    check(functions_, t.name, t.args.size(), "function");
    for (const auto& a : t.args) add(a);
  }

 private:
  static void check(std::map<std::string, std::size_t>& table, const std::string& name,
                    std::size_t arity, const char* what) {
    auto [it, inserted] = table.emplace(name, arity);
    if (!inserted && it->second != arity) {
      throw Error(ErrorKind::arity_clash, std::string(what) + " '" + name + "' used with arity " +
                                              std::to_string(it->second) + " and " +
                                              std::to_string(arity));
    }
  }

  std::map<std::string, std::size_t> predicates_;
  std::map<std::string, std::size_t> functions_;
};

// ---- printing (TPTP surface syntax) ---------------------------------------

inline bool is_lower_word(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_') return false;
  }
  return true;
}

// Functors that are not TPTP lower_words are single-quoted.
inline std::string quote_functor(std::string_view name) {
  if (is_lower_word(name)) return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

inline void print(const Term& t, std::string& out) {
  if (t.is_variable()) {
    out += t.name;
    return;
  }
  out += quote_functor(t.name);
  if (t.args.empty()) return;
  out.push_back('(');
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i > 0) out.push_back(',');
    print(t.args[i], out);
  }
  out.push_back(')');
}

inline void print(const Atom& a, std::string& out) {
  out += quote_functor(a.predicate);
  if (a.args.empty()) return;
  out.push_back('(');
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i > 0) out.push_back(',');
    print(a.args[i], out);
  }
  out.push_back(')');
}

// Binary connectives are always parenthesized, so printing never depends on
// precedence and the parser gets back the identical tree.
inline void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::atom:
      print(f.atom, out);
      return;
    case K::negation:
      out.push_back('~');
      print(f.children.front(), out);
      return;
    case K::forall:
    case K::exists:
      out += f.kind == K::forall ? "! [" : "? [";
      out += f.variable;
      out += "] : ";
      print(f.children.front(), out);
      return;
    case K::conjunction:
    case K::disjunction:
    case K::implication: {
      const char* op = f.kind == K::conjunction ? " & " : f.kind == K::disjunction ? " | " : " => ";
      out.push_back('(');
      print(f.children[0], out);
      out += op;
      print(f.children[1], out);
      out.push_back(')');
      return;
    }
  }
}

inline std::string to_string(const Term& t) {
  std::string s;
  print(t, s);
  return s;
}
inline std::string to_string(const Atom& a) {
  std::string s;
  print(a, s);
  return s;
}
inline std::string to_string(const Formula& f) {
  std::string s;
  print(f, s);
  return s;
}

}  // namespace corg::fol

template <>
struct std::hash<corg::fol::Term> {
  std::size_t operator()(const corg::fol::Term& t) const noexcept {
    std::size_t h = std::hash<std::string>{}(t.name) ^ (static_cast<std::size_t>(t.kind) << 1);
    for (const auto& a : t.args) h = h * 1000003u ^ (*this)(a);
    return h;
  }
};

template <>
struct std::hash<corg::fol::Atom> {
  std::size_t operator()(const corg::fol::Atom& a) const noexcept {
    std::size_t h = std::hash<std::string>{}(a.predicate);
    std::hash<corg::fol::Term> th;
    for (const auto& t : a.args) h = h * 1000003u ^ th(t);
    return h;
  }
};

#endif  // CORG_FOL_HPP
