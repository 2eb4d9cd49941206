#ifndef CORG_TPTP_HPP
#define CORG_TPTP_HPP

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "corg/clausify.hpp"
#include "corg/error.hpp"
#include "corg/fol.hpp"

// Surface grammar accepted by parse_fol (docs/fol-grammar.md has the long
// version):
//
//   formula  := unit ( '=>' formula | '<=' unit | ('&' unit)+ | ('|' unit)+ )?
//   unit     := '~' unit | quant | '(' formula ')' | atom
//   quant    := ('!' | '?') '[' VAR (',' VAR)* ']' ':' unit
//             | ('forall' | 'exists') VAR unit
//   atom     := NAME [ '(' term (',' term)* ')' ]
//   term     := VAR | NAME [ '(' term (',' term)* ')' ]
//
// '->' is accepted for '=>' and 'not' for '~'. A name is a variable when it
// is bound by an enclosing quantifier or, unquoted, starts with an uppercase
// letter. NAMEs may be single-quoted.

namespace corg::fol {

namespace detail {

enum class Tok { name, quoted, lparen, rparen, lbrack, rbrack, comma, colon, dot,
                 bang, question, tilde, amp, bar, implies, implied, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= src_.size()) {
        out.push_back({Tok::end, "", i_});
        return out;
      }
      std::size_t start = i_;
      char c = src_[i_];
      auto single = [&](Tok k) {
        ++i_;
        out.push_back({k, std::string(1, c), start});
      };
      switch (c) {
        case '(': single(Tok::lparen); continue;
        case ')': single(Tok::rparen); continue;
        case '[': single(Tok::lbrack); continue;
        case ']': single(Tok::rbrack); continue;
        case ',': single(Tok::comma); continue;
        case ':': single(Tok::colon); continue;
        case '.': single(Tok::dot); continue;
        case '!': single(Tok::bang); continue;
        case '?': single(Tok::question); continue;
        case '~': single(Tok::tilde); continue;
        case '&': single(Tok::amp); continue;
        case '|': single(Tok::bar); continue;
        default: break;
      }
      if (src_.substr(i_, 3) == "<=>") {
        throw PositionedError(ErrorKind::syntax_error, i_,
                              "'<=>' is not supported (offset " + std::to_string(i_) + ")");
      }
      if (src_.substr(i_, 2) == "=>" || src_.substr(i_, 2) == "->") {
        i_ += 2;
        out.push_back({Tok::implies, "=>", start});
        continue;
      }
      if (src_.substr(i_, 2) == "<=") {
        i_ += 2;
        out.push_back({Tok::implied, "<=", start});
        continue;
      }
      if (c == '\'') {
        out.push_back({Tok::quoted, quoted(), start});
        continue;
      }
      if (is_name_char(c)) {
        while (i_ < src_.size() && is_name_char(src_[i_])) ++i_;
        out.push_back({Tok::name, std::string(src_.substr(start, i_ - start)), start});
        continue;
      }
      throw PositionedError(ErrorKind::syntax_error, i_,
                            std::string("unexpected character '") + c + "' at offset " +
                                std::to_string(i_));
    }
  }

 private:
  static bool is_name_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '$';
  }

  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '%') {
        while (i_ < src_.size() && src_[i_] != '\n') ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else {
        return;
      }
    }
  }

  std::string quoted() {
    std::size_t start = i_++;
    std::string out;
    while (i_ < src_.size()) {
      char c = src_[i_++];
      if (c == '\\' && i_ < src_.size()) {
        out.push_back(src_[i_++]);
      } else if (c == '\'') {
        if (out.empty()) {
          throw PositionedError(ErrorKind::syntax_error, start, "empty quoted name");
        }
        return out;
      } else {
        out.push_back(c);
      }
    }
    throw PositionedError(ErrorKind::syntax_error, start,
                          "unterminated quoted name at offset " + std::to_string(start));
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Formula formula_eof() {
    Formula f = formula();
    expect(Tok::end, "end of input");
    return f;
  }

  // fof(name, role, formula).  /  cnf(name, role, disjunction).
  struct Annotated {
    std::string language;
    std::string name;
    std::string role;
    Formula formula;
  };

  bool at_end() const { return peek().kind == Tok::end; }

  Annotated annotated() {
    Token lang = next();
    if (lang.kind != Tok::name || (lang.text != "fof" && lang.text != "cnf")) {
      fail(lang, "expected 'fof' or 'cnf'");
    }
    expect(Tok::lparen, "'('");
    Token name = next();
    if (name.kind != Tok::name && name.kind != Tok::quoted) fail(name, "expected formula name");
    expect(Tok::comma, "','");
    Token role = next();
    if (role.kind != Tok::name) fail(role, "expected role");
    expect(Tok::comma, "','");
    Formula f = formula();
    expect(Tok::rparen, "')'");
    expect(Tok::dot, "'.'");
    return Annotated{lang.text, name.text, role.text, std::move(f)};
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    std::string got = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw PositionedError(ErrorKind::syntax_error, t.pos,
                          what + ", got " + got + " at offset " + std::to_string(t.pos));
  }

  void expect(Tok k, const char* what) {
    Token t = next();
    if (t.kind != k) fail(t, std::string("expected ") + what);
  }

  Formula formula() {
    Formula lhs = unit();
    switch (peek().kind) {
      case Tok::implies:
        next();
        return Formula::implication(std::move(lhs), formula());
      case Tok::implied:
        next();
        return Formula::implication(unit(), std::move(lhs));
      case Tok::amp:
      case Tok::bar: {
        Tok op = peek().kind;
        while (peek().kind == op) {
          next();
          Formula rhs = unit();
          lhs = op == Tok::amp ? Formula::conjunction(std::move(lhs), std::move(rhs))
                               : Formula::disjunction(std::move(lhs), std::move(rhs));
        }
        if (peek().kind == Tok::amp || peek().kind == Tok::bar) {
          fail(peek(), "mixed '&' and '|' need parentheses");
        }
        if (peek().kind == Tok::implies) {
          next();
          return Formula::implication(std::move(lhs), formula());
        }
        return lhs;
      }
      default:
        return lhs;
    }
  }

  bool is_keyword(const Token& t, std::string_view kw) const {
    return t.kind == Tok::name && t.text == kw;
  }

  Formula quantified(bool universal, std::vector<std::string> vars) {
    for (const auto& v : vars) bound_.push_back(v);
    Formula body = unit();
    for (std::size_t i = 0; i < vars.size(); ++i) bound_.pop_back();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = universal ? Formula::forall(*it, std::move(body)) : Formula::exists(*it, std::move(body));
    }
    return body;
  }

  Formula unit() {
    const Token& t = peek();
    if (t.kind == Tok::tilde || is_keyword(t, "not")) {
      next();
      return Formula::negation(unit());
    }
    if (t.kind == Tok::bang || t.kind == Tok::question) {
      bool universal = next().kind == Tok::bang;
      expect(Tok::lbrack, "'['");
      std::vector<std::string> vars;
      while (true) {
        Token v = next();
        if (v.kind != Tok::name) fail(v, "expected variable");
        vars.push_back(v.text);
        if (peek().kind == Tok::comma) {
          next();
          continue;
        }
        break;
      }
      expect(Tok::rbrack, "']'");
      expect(Tok::colon, "':'");
      return quantified(universal, std::move(vars));
    }
    if ((is_keyword(t, "exists") || is_keyword(t, "forall")) && peek(1).kind == Tok::name) {
      bool universal = next().text == "forall";
      Token v = next();
      return quantified(universal, {v.text});
    }
    if (t.kind == Tok::lparen) {
      next();
      Formula f = formula();
      expect(Tok::rparen, "')'");
      return f;
    }
    return Formula::make_atom(atom());
  }

  bool is_bound(const std::string& name) const {
    return std::find(bound_.begin(), bound_.end(), name) != bound_.end();
  }

  Atom atom() {
    Token t = next();
    if (t.kind != Tok::name && t.kind != Tok::quoted) fail(t, "expected atom");
    if (t.kind == Tok::name && (is_bound(t.text) || std::isupper(static_cast<unsigned char>(t.text[0])))) {
      fail(t, "expected predicate, found variable");
    }
    return Atom{t.text, arguments()};
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (peek().kind != Tok::lparen) return args;
    next();
    while (true) {
      args.push_back(term());
      Token sep = next();
      if (sep.kind == Tok::rparen) return args;
      if (sep.kind != Tok::comma) fail(sep, "expected ',' or ')'");
    }
  }

  Term term() {
    Token t = next();
    if (t.kind != Tok::name && t.kind != Tok::quoted) fail(t, "expected term");
    bool var = t.kind == Tok::name &&
               (is_bound(t.text) || std::isupper(static_cast<unsigned char>(t.text[0])));
    if (var) {
      if (peek().kind == Tok::lparen) fail(peek(), "variable applied to arguments");
      return Term::variable(t.text);
    }
    return Term::function(t.text, arguments());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace detail

// Throws SyntaxError (PositionedError with the character offset).
inline Formula parse_fol(std::string_view text) {
  return detail::Parser(text).formula_eof();
}

struct AnnotatedFormula {
  std::string language;  // "fof" or "cnf"
  std::string name;
  std::string role;
  Formula formula;
};

// Parses a sequence of fof/cnf statements ('%' comments allowed).
inline std::vector<AnnotatedFormula> parse_tptp(std::string_view text) {
  detail::Parser p(text);
  std::vector<AnnotatedFormula> out;
  while (!p.at_end()) {
    auto a = p.annotated();
    out.push_back({std::move(a.language), std::move(a.name), std::move(a.role), std::move(a.formula)});
  }
  return out;
}

inline std::string to_tptp(const Formula& f, std::string_view name, std::string_view role = "axiom") {
  std::string out = "fof(";
  out += quote_functor(name);
  out += ", ";
  out += role;
  out += ", ";
  print(f, out);
  out += ").";
  return out;
}

inline std::string to_tptp(const Clause& c, std::string_view name, std::string_view role = "axiom") {
  std::string out = "cnf(";
  out += quote_functor(name);
  out += ", ";
  out += role;
  out += ", ";
  bool first = true;
  for (const auto& a : c.body) {
    if (!first) out += " | ";
    first = false;
    out.push_back('~');
    print(a, out);
  }
  for (const auto& a : c.head) {
    if (!first) out += " | ";
    first = false;
    print(a, out);
  }
  if (first) out += "$false";
  out += ").";
  return out;
}

}  // namespace corg::fol

#endif  // CORG_TPTP_HPP
