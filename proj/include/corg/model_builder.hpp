#ifndef CORG_MODEL_BUILDER_HPP
#define CORG_MODEL_BUILDER_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "corg/clausify.hpp"
#include "corg/error.hpp"
#include "corg/fol.hpp"
#include "corg/tptp.hpp"

namespace corg {

using GroundAtom = fol::Atom;

struct DerivationStep {
  GroundAtom derived;
  std::string clause_origin;  // empty for input facts
  std::vector<std::size_t> premises;

  bool is_input() const noexcept { return clause_origin.empty(); }
  bool operator==(const DerivationStep&) const = default;
};

class PartialModel {
 public:
  const std::vector<DerivationStep>& trace() const noexcept { return trace_; }
  std::size_t size() const noexcept { return trace_.size(); }
  bool empty() const noexcept { return trace_.empty(); }
  bool complete() const noexcept { return complete_; }
  std::size_t rounds() const noexcept { return rounds_; }
  std::size_t suppressed_by_depth() const noexcept { return suppressed_by_depth_; }
  std::size_t input_count() const noexcept { return inputs_; }

  const GroundAtom& atom(std::size_t i) const { return trace_[i].derived; }

  std::optional<std::size_t> find(const GroundAtom& a) const {
    auto it = lookup_.find(a);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const GroundAtom& a) const { return lookup_.contains(a); }

  std::vector<GroundAtom> atoms() const {
    std::vector<GroundAtom> out;
    out.reserve(trace_.size());
    for (const auto& s : trace_) out.push_back(s.derived);
    return out;
  }

 private:
  friend class Saturator;

  bool append(DerivationStep step) {
    auto [it, inserted] = lookup_.emplace(step.derived, trace_.size());
    if (!inserted) return false;
    trace_.push_back(std::move(step));
    return true;
  }

  std::vector<DerivationStep> trace_;
  std::unordered_map<GroundAtom, std::size_t> lookup_;
  bool complete_ = true;
  std::size_t rounds_ = 0;
  std::size_t suppressed_by_depth_ = 0;
  std::size_t inputs_ = 0;
};

struct BuilderConfig {
  std::size_t max_term_depth = 3;
  std::size_t max_atoms = 10'000;
  std::size_t max_rounds = 100;

  void validate() const {
    if (max_term_depth == 0 || max_atoms == 0 || max_rounds == 0) {
      throw Error(ErrorKind::invalid_config, "model builder bounds must be positive");
    }
  }
};

// Rejects what saturate() cannot run: non-Horn or non-range-restricted
// clauses. Headless clauses are accepted and never fire.
inline void check_clauses(std::span<const fol::Clause> clauses) {
  for (const auto& c : clauses) {
    if (!c.is_horn()) {
      throw Error(ErrorKind::non_horn_clause, "clause from " + c.origin + " is not Horn: " + to_string(c));
    }
    if (!c.is_range_restricted()) {
      throw Error(ErrorKind::non_range_restricted_clause,
                  "clause from " + c.origin + " is not range-restricted: " + to_string(c));
    }
  }
}

class Saturator {
 public:
  Saturator(std::span<const fol::Clause> clauses, const BuilderConfig& cfg)
      : clauses_(clauses), cfg_(cfg) {
    cfg_.validate();
    check_clauses(clauses_);
  }

  PartialModel run(std::span<const GroundAtom> facts) {
    PartialModel m;
    for (const auto& f : facts) {
      if (!f.is_ground()) {
        throw Error(ErrorKind::invalid_config, "input fact is not ground: " + fol::to_string(f));
      }
      if (m.append(DerivationStep{f, "", {}})) index_atom(m, m.size() - 1);
    }
    m.inputs_ = m.size();

    std::size_t delta_start = 0;
    std::size_t delta_end = m.size();
    bool first_round = true;
    while (true) {
      if (m.rounds_ == cfg_.max_rounds) {
        // Out of rounds: complete only if one more round would add nothing.
        auto probe = candidates(m, delta_start, delta_end, first_round);
        for (const auto& c : probe) {
          if (!m.contains(c.head)) {
            m.complete_ = false;
            break;
          }
        }
        break;
      }
      auto round = candidates(m, delta_start, delta_end, first_round);
      ++m.rounds_;
      first_round = false;
      std::sort(round.begin(), round.end(), [](const Candidate& a, const Candidate& b) {
        if (a.clause != b.clause) return a.clause < b.clause;
        return a.premises < b.premises;
      });
      std::size_t before = m.size();
      bool budget_hit = false;
      for (auto& c : round) {
        if (m.contains(c.head)) continue;
        if (m.size() >= cfg_.max_atoms) {
          budget_hit = true;
          break;
        }
        m.append(DerivationStep{std::move(c.head), clauses_[c.clause].origin, std::move(c.premises)});
        index_atom(m, m.size() - 1);
      }
      if (budget_hit) {
        m.complete_ = false;
        break;
      }
      if (m.size() == before) break;
      delta_start = before;
      delta_end = m.size();
    }
    if (m.suppressed_by_depth_ > 0) m.complete_ = false;
    return m;
  }

 private:
  struct Candidate {
    std::size_t clause;
    std::vector<std::size_t> premises;
    GroundAtom head;
  };

  using Binding = std::pair<const std::string*, const fol::Term*>;

  static std::string key(const fol::Atom& a) {
    return a.predicate + "/" + std::to_string(a.arity());
  }

  void index_atom(const PartialModel& m, std::size_t i) {
    by_predicate_[key(m.atom(i))].push_back(i);
  }

  static const fol::Term* bound(const std::vector<Binding>& s, const std::string& var) {
    for (const auto& [name, value] : s) {
      if (*name == var) return value;
    }
    return nullptr;
  }

  static bool match(const fol::Term& pattern, const fol::Term& ground, std::vector<Binding>& s) {
    if (pattern.is_variable()) {
      if (const fol::Term* v = bound(s, pattern.name)) return *v == ground;
      s.emplace_back(&pattern.name, &ground);
      return true;
    }
    if (pattern.name != ground.name || pattern.args.size() != ground.args.size() ||
        ground.is_variable()) {
      return false;
    }
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
      if (!match(pattern.args[i], ground.args[i], s)) return false;
    }
    return true;
  }

  static fol::Term instantiate(const fol::Term& t, const std::vector<Binding>& s) {
    if (t.is_variable()) return *bound(s, t.name);
    fol::Term out{t.kind, t.name, {}};
    out.args.reserve(t.args.size());
    for (const auto& a : t.args) out.args.push_back(instantiate(a, s));
    return out;
  }

  struct Range {
    std::size_t lo;
    std::size_t hi;
  };

  void join(const PartialModel& m, std::size_t ci, std::size_t pos, const std::vector<Range>& ranges,
            std::vector<Binding>& subst, std::vector<std::size_t>& premises,
            std::vector<Candidate>& out) {
    const fol::Clause& c = clauses_[ci];
    if (pos == c.body.size()) {
      GroundAtom head{c.head[0].predicate, {}};
      head.args.reserve(c.head[0].args.size());
      for (const auto& t : c.head[0].args) head.args.push_back(instantiate(t, subst));
      if (head.depth() > cfg_.max_term_depth) {
        ++suppressed_;
        return;
      }
      if (m.contains(head)) return;
      out.push_back(Candidate{ci, premises, std::move(head)});
      return;
    }
    const fol::Atom& pattern = c.body[pos];
    auto it = by_predicate_.find(key(pattern));
    if (it == by_predicate_.end()) return;
    const auto& ids = it->second;
    auto first = std::lower_bound(ids.begin(), ids.end(), ranges[pos].lo);
    for (auto p = first; p != ids.end() && *p < ranges[pos].hi; ++p) {
      std::size_t mark = subst.size();
      bool ok = true;
      const GroundAtom& g = m.atom(*p);
      for (std::size_t k = 0; k < pattern.args.size() && ok; ++k) {
        ok = match(pattern.args[k], g.args[k], subst);
      }
      if (ok) {
        premises.push_back(*p);
        join(m, ci, pos + 1, ranges, subst, premises, out);
        premises.pop_back();
      }
      subst.resize(mark);
    }
  }

  // Semi-naive: each body match must use at least one atom from the last
  // round's delta; position i is the first such premise, earlier positions
  // draw from older atoms only, so every combination is produced once.
  std::vector<Candidate> candidates(PartialModel& m, std::size_t delta_start,
                                    std::size_t delta_end, bool first_round) {
    std::vector<Candidate> out;
    suppressed_ = 0;
    std::vector<Binding> subst;
    std::vector<std::size_t> premises;
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      const fol::Clause& c = clauses_[ci];
      if (c.head.empty()) continue;
      if (c.body.empty()) {
        if (first_round) join(m, ci, 0, {}, subst, premises, out);
        continue;
      }
      std::vector<Range> ranges(c.body.size());
      for (std::size_t i = 0; i < c.body.size(); ++i) {
        for (std::size_t j = 0; j < c.body.size(); ++j) {
          if (j < i) ranges[j] = {0, delta_start};
          else if (j == i) ranges[j] = {delta_start, delta_end};
          else ranges[j] = {0, delta_end};
        }
        join(m, ci, 0, ranges, subst, premises, out);
      }
    }
    m.suppressed_by_depth_ += suppressed_;
    return out;
  }

  std::span<const fol::Clause> clauses_;
  BuilderConfig cfg_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_predicate_;
  std::size_t suppressed_ = 0;
};

// Bounded forward chaining to a (possibly partial) model. Throws
// NonHornClause / NonRangeRestrictedClause before doing any work.
inline PartialModel saturate(std::span<const GroundAtom> facts, std::span<const fol::Clause> clauses,
                             const BuilderConfig& cfg = {}) {
  return Saturator(clauses, cfg).run(facts);
}

struct ExtractionConfig {
  bool drop_relations = true;
  bool drop_skolem = true;
  std::set<std::string> ignore;
};

// r1Actor, r2Theme, ...: the semantic-role predicates of the text parser.
inline bool is_role_predicate(std::string_view s) {
  if (s.size() < 3 || s[0] != 'r') return false;
  std::size_t i = 1;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 1 || i >= s.size() || !std::isupper(static_cast<unsigned char>(s[i]))) return false;
  for (++i; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (!std::isalnum(c) && c != '_') return false;
  }
  return true;
}

inline bool is_relation_predicate(const GroundAtom& a) {
  return a.arity() == 2 || a.predicate.starts_with("inv_") || is_role_predicate(a.predicate);
}

inline bool is_skolem_symbol(std::string_view s) { return s.starts_with("sk_"); }

// Word-like symbols in first-derivation order. Term structure is dropped.
inline std::vector<std::string> extract_symbols(const PartialModel& m,
                                                const ExtractionConfig& cfg = {}) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto keep = [&](const std::string& s) {
    if (cfg.drop_skolem && is_skolem_symbol(s)) return;
    if (cfg.ignore.contains(s)) return;
    if (seen.insert(s).second) out.push_back(s);
  };
  auto walk = [&](auto&& self, const fol::Term& t) -> void {
    if (t.is_variable()) return;
    keep(t.name);
    for (const auto& a : t.args) self(self, a);
  };
  for (const auto& step : m.trace()) {
    const GroundAtom& a = step.derived;
    if (!(cfg.drop_relations && is_relation_predicate(a))) keep(a.predicate);
    for (const auto& t : a.args) walk(walk, t);
  }
  return out;
}

// Minimal derivation tree for target. Shared sub-derivations are expanded
// once and referenced by step number afterwards.
inline std::string explain(const PartialModel& m, const GroundAtom& target) {
  auto idx = m.find(target);
  if (!idx) throw Error(ErrorKind::atom_not_in_model, fol::to_string(target) + " is not in the model");
  std::string out;
  std::set<std::size_t> shown;
  auto render = [&](auto&& self, std::size_t i, std::size_t indent) -> void {
    const DerivationStep& s = m.trace()[i];
    out.append(indent * 2, ' ');
    out += fol::to_string(s.derived);
    out += "  [#" + std::to_string(i) + "] ";
    if (s.is_input()) {
      out += "input\n";
      return;
    }
    if (!shown.insert(i).second) {
      out += "by " + s.clause_origin + " (see above)\n";
      return;
    }
    out += "by " + s.clause_origin + "\n";
    for (std::size_t p : s.premises) self(self, p, indent + 1);
  };
  render(render, *idx, 0);
  return out;
}

// One fof line per atom, in trace order.
inline std::string model_to_tptp(const PartialModel& m, std::string_view prefix = "m") {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += fol::to_tptp(fol::Formula::make_atom(m.atom(i)), std::string(prefix) + std::to_string(i),
                        "axiom");
    out.push_back('\n');
  }
  return out;
}

inline nlohmann::json trace_to_json(const PartialModel& m) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& s = m.trace()[i];
    steps.push_back({{"step", i},
                     {"atom", fol::to_string(s.derived)},
                     {"clause", s.is_input() ? nlohmann::json(nullptr) : nlohmann::json(s.clause_origin)},
                     {"premises", s.premises}});
  }
  return steps;
}

}  // namespace corg

#endif  // CORG_MODEL_BUILDER_HPP
