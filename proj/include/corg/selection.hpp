#ifndef CORG_SELECTION_HPP
#define CORG_SELECTION_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corg/embeddings.hpp"
#include "corg/error.hpp"
#include "corg/fol.hpp"
#include "corg/kg_store.hpp"

namespace corg {

struct SineConfig {
  double tolerance = 1.5;
  std::optional<std::size_t> max_depth = 3;  // nullopt: unlimited
  std::size_t generality_threshold = 0;     // 0: off
  std::optional<double> similarity_threshold;

  void validate() const {
    if (!(tolerance >= 1.0)) {
      throw Error(ErrorKind::invalid_config, "SInE tolerance must be >= 1");
    }
    if (max_depth && *max_depth == 0) {
      throw Error(ErrorKind::invalid_config, "SInE depth must be positive");
    }
    if (similarity_threshold && (*similarity_threshold < 0.0 || *similarity_threshold > 1.0)) {
      throw Error(ErrorKind::invalid_config, "similarity threshold must lie in [0, 1]");
    }
  }
};

// occ(s) = number of axioms mentioning s, each axiom counted once.
class AxiomIndex {
 public:
  AxiomIndex() = default;

  explicit AxiomIndex(std::span<const fol::Formula> axioms) {
    axiom_symbols_.reserve(axioms.size());
    for (std::size_t i = 0; i < axioms.size(); ++i) {
      auto syms = fol::symbols(axioms[i]);
      for (const auto& s : syms) by_symbol_[s].push_back(i);
      axiom_symbols_.emplace_back(syms.begin(), syms.end());
    }
  }

  std::size_t occ(std::string_view symbol) const {
    auto it = by_symbol_.find(std::string(symbol));
    return it == by_symbol_.end() ? 0 : it->second.size();
  }

  std::span<const std::size_t> axioms_with(std::string_view symbol) const {
    auto it = by_symbol_.find(std::string(symbol));
    if (it == by_symbol_.end()) return {};
    return it->second;
  }

  std::size_t axiom_count() const noexcept { return axiom_symbols_.size(); }
  const std::vector<std::string>& symbols_of(std::size_t axiom) const {
    return axiom_symbols_[axiom];
  }

  std::vector<std::string> all_symbols() const {
    std::vector<std::string> out;
    out.reserve(by_symbol_.size());
    for (const auto& [s, ids] : by_symbol_) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::unordered_map<std::string, std::vector<std::size_t>> by_symbol_;
  std::vector<std::vector<std::string>> axiom_symbols_;
};

inline AxiomIndex build_index(std::span<const fol::Formula> axioms) { return AxiomIndex(axioms); }

namespace detail {

inline double generality(const AxiomIndex& index, std::string_view s, const SineConfig& cfg) {
  return static_cast<double>(std::max(index.occ(s), cfg.generality_threshold));
}

// s triggers A iff s occurs in A and gen(s) <= tolerance * min gen over A.
inline bool triggers(const AxiomIndex& index, std::string_view s, std::size_t axiom,
                     const SineConfig& cfg) {
  double least = std::numeric_limits<double>::infinity();
  for (const auto& t : index.symbols_of(axiom)) least = std::min(least, generality(index, t, cfg));
  return generality(index, s, cfg) <= cfg.tolerance * least;
}

inline std::vector<std::size_t> sine_from_seeds(const AxiomIndex& index,
                                                const std::set<std::string>& seeds,
                                                const SineConfig& cfg) {
  std::vector<bool> selected(index.axiom_count(), false);
  std::set<std::string> reached = seeds;
  std::vector<std::string> frontier(seeds.begin(), seeds.end());
  for (std::size_t depth = 1; !frontier.empty(); ++depth) {
    if (cfg.max_depth && depth > *cfg.max_depth) break;
    std::vector<std::size_t> fresh;
    for (const auto& s : frontier) {
      for (std::size_t a : index.axioms_with(s)) {
        if (!selected[a] && triggers(index, s, a, cfg)) {
          selected[a] = true;
          fresh.push_back(a);
        }
      }
    }
    std::set<std::string> next;
    for (std::size_t a : fresh) {
      for (const auto& t : index.symbols_of(a)) {
        if (reached.insert(t).second) next.insert(t);
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (selected[i]) out.push_back(i);
  }
  return out;
}

}  // namespace detail

// Returns the selected axiom positions in ascending order.
inline std::vector<std::size_t> sine_select(const AxiomIndex& index,
                                            const std::set<std::string>& goal_symbols,
                                            const SineConfig& cfg = {}) {
  cfg.validate();
  if (goal_symbols.empty()) throw Error(ErrorKind::empty_goal, "SInE needs at least one goal symbol");
  return detail::sine_from_seeds(index, goal_symbols, cfg);
}

// Goal symbols plus every indexed symbol whose embedding is at least
// similarity_threshold-similar to some goal symbol.
inline std::set<std::string> similarity_seeds(const AxiomIndex& index,
                                              const std::set<std::string>& goal_symbols,
                                              double threshold, const UnitVectors& vectors) {
  std::set<std::string> seeds = goal_symbols;
  std::vector<Vector> goals;
  for (const auto& g : goal_symbols) {
    Vector v = vectors.get(g);
    if (!v.empty()) goals.push_back(std::move(v));
  }
  for (const auto& s : index.all_symbols()) {
    if (seeds.contains(s)) continue;
    Vector v = vectors.get(s);
    for (const auto& g : goals) {
      if (UnitVectors::similarity(v, g) >= threshold) {
        seeds.insert(s);
        break;
      }
    }
  }
  return seeds;
}

// Without a similarity_threshold this is plain SInE.
inline std::vector<std::size_t> similarity_sine_select(const AxiomIndex& index,
                                                       const std::set<std::string>& goal_symbols,
                                                       const SineConfig& cfg,
                                                       const UnitVectors& vectors) {
  cfg.validate();
  if (goal_symbols.empty()) throw Error(ErrorKind::empty_goal, "SInE needs at least one goal symbol");
  if (!cfg.similarity_threshold) return detail::sine_from_seeds(index, goal_symbols, cfg);
  return detail::sine_from_seeds(
      index, similarity_seeds(index, goal_symbols, *cfg.similarity_threshold, vectors), cfg);
}

inline std::vector<std::size_t> similarity_sine_select(const AxiomIndex& index,
                                                       const std::set<std::string>& goal_symbols,
                                                       const SineConfig& cfg,
                                                       const EmbeddingTable& table,
                                                       const OovPolicy& policy = {}) {
  UnitVectors vectors(table, policy);
  return similarity_sine_select(index, goal_symbols, cfg, vectors);
}

struct PrefilterConfig {
  double theta = 0.4;
  // Also accept a triple when its subject (not just the object) is similar.
  bool include_subject = false;
};

// Positions of the kept triples, in input order. A triple is kept iff the
// best cosine between its object and any problem word reaches theta.
inline std::vector<std::size_t> triple_prefilter_ids(std::span<const Triple> triples,
                                                     std::span<const std::string> problem_words,
                                                     const PrefilterConfig& cfg,
                                                     const UnitVectors& vectors) {
  std::vector<Vector> words;
  words.reserve(problem_words.size());
  for (const auto& w : problem_words) words.push_back(vectors.get(w));

  std::unordered_map<std::string_view, double> memo;
  auto best = [&](const std::string& name) {
    auto it = memo.find(name);
    if (it != memo.end()) return it->second;
    const Vector* cached = vectors.cached(name);
    Vector computed;
    if (cached == nullptr) {
      computed = vectors.get(name);
      cached = &computed;
    }
    double b = -1.0;
    if (cached->empty()) {
      if (!words.empty()) b = 0.0;
    } else {
      for (const auto& w : words) b = std::max(b, UnitVectors::similarity(*cached, w));
    }
    memo.emplace(name, b);
    return b;
  };

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    double score = best(triples[i].object.name);
    if (cfg.include_subject) score = std::max(score, best(triples[i].subject.name));
    if (score >= cfg.theta) kept.push_back(i);
  }
  return kept;
}

inline std::vector<Triple> triple_prefilter(std::span<const Triple> triples,
                                            std::span<const std::string> problem_words,
                                            double theta, const EmbeddingTable& table,
                                            const OovPolicy& policy = {}) {
  UnitVectors vectors(table, policy);
  PrefilterConfig cfg;
  cfg.theta = theta;
  std::vector<Triple> out;
  for (std::size_t i : triple_prefilter_ids(triples, problem_words, cfg, vectors)) {
    out.push_back(triples[i]);
  }
  return out;
}

}  // namespace corg

#endif  // CORG_SELECTION_HPP
