#ifndef CORG_TRANSLATE_HPP
#define CORG_TRANSLATE_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "corg/error.hpp"
#include "corg/fol.hpp"
#include "corg/kg_store.hpp"

namespace corg {

// Predicate spelling for a relation. A short fixed table overrides the
// snake_case id where the logic-level name is known (at_location is written
// "atlocation"); everything else keeps its id.
inline std::string relation_predicate(const RelationId& r) {
  static const std::map<std::string, std::string> spelling{
      {"at_location", "atlocation"},
  };
  auto it = spelling.find(r.name);
  return it == spelling.end() ? r.name : it->second;
}

inline std::string inverse_predicate(const RelationId& r) {
  return "inv_" + relation_predicate(r);
}

namespace detail {

inline void require_positive(const Triple& t) {
  if (t.negated) {
    throw Error(ErrorKind::negated_unsupported,
                "negated triple (" + t.subject.name + ", not_" + t.relation.name + ", " +
                    t.object.name + ") has no translation");
  }
}

// ! [X] : (head(X) => ? [Y] : (rel(X,Y) & tail(Y)))
inline fol::Formula existential_schema(const std::string& head, const std::string& rel,
                                       const std::string& tail) {
  using fol::Formula;
  using fol::Term;
  Term x = Term::variable("X");
  Term y = Term::variable("Y");
  Formula body = Formula::conjunction(Formula::make_atom(rel, {x, y}),
                                      Formula::make_atom(tail, {y}));
  return Formula::forall(
      "X", Formula::implication(Formula::make_atom(head, {x}), Formula::exists("Y", std::move(body))));
}

}  // namespace detail

// rel(subject, object)
inline fol::Formula translate_factual(const Triple& t) {
  detail::require_positive(t);
  return fol::Formula::make_atom(relation_predicate(t.relation),
                                 {fol::Term::constant(t.subject.name),
                                  fol::Term::constant(t.object.name)});
}

inline fol::Formula translate_existential(const Triple& t) {
  detail::require_positive(t);
  return detail::existential_schema(t.subject.name, relation_predicate(t.relation), t.object.name);
}

// The same edge read from object to subject under inv_<relation>.
inline fol::Formula translate_inverse(const Triple& t) {
  detail::require_positive(t);
  return detail::existential_schema(t.object.name, inverse_predicate(t.relation), t.subject.name);
}

// Factual reading of the reversed edge: inv_rel(object, subject).
inline fol::Formula translate_inverse_factual(const Triple& t) {
  detail::require_positive(t);
  return fol::Formula::make_atom(inverse_predicate(t.relation),
                                 {fol::Term::constant(t.object.name),
                                  fol::Term::constant(t.subject.name)});
}

enum class Scheme { factual, existential };

struct Axiom {
  std::string id;
  fol::Formula formula;
  std::size_t triple_id = 0;
  bool inverse = false;
};

struct TranslationResult {
  std::vector<Axiom> axioms;
  std::size_t dropped_negated = 0;
};

// Axiom ids come from the triple's graph id (1-based): f<k> factual, t<k>
// existential, i<k> inverse. Skolem names derive from them, so the output
// does not depend on the order in which triples are translated.
inline TranslationResult translate_triples(std::span<const Triple> triples,
                                           std::span<const std::size_t> triple_ids, Scheme scheme,
                                           bool with_inverse) {
  TranslationResult out;
  out.axioms.reserve(triples.size() * (with_inverse ? 2 : 1));
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    std::size_t id = triple_ids.empty() ? i : triple_ids[i];
    if (t.negated) {
      ++out.dropped_negated;
      continue;
    }
    std::string k = std::to_string(id + 1);
    if (scheme == Scheme::factual) {
      out.axioms.push_back({"f" + k, translate_factual(t), id, false});
      if (with_inverse) out.axioms.push_back({"g" + k, translate_inverse_factual(t), id, true});
    } else {
      out.axioms.push_back({"t" + k, translate_existential(t), id, false});
      if (with_inverse) out.axioms.push_back({"i" + k, translate_inverse(t), id, true});
    }
  }
  return out;
}

}  // namespace corg

#endif  // CORG_TRANSLATE_HPP
