#ifndef CORG_SCORER_HPP
#define CORG_SCORER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "corg/embeddings.hpp"
#include "corg/error.hpp"

namespace corg {

struct ScorerConfig {
  double temperature = 1.0;

  void validate() const {
    if (!(temperature > 0.0)) throw Error(ErrorKind::invalid_config, "temperature must be positive");
  }
};

struct SequenceEmbedding {
  Vector values;
  std::size_t resolved = 0;  // words that contributed a non-zero vector
  bool is_zero() const noexcept { return resolved == 0; }
};

// Componentwise mean over the words that resolve; empty or all-OOV input
// gives the zero vector with is_zero() set.
inline SequenceEmbedding embed_sequence(std::span<const std::string> words,
                                        const EmbeddingTable& table,
                                        const OovPolicy& policy = {}) {
  SequenceEmbedding out{Vector(table.dimension(), 0.0), 0};
  for (const auto& w : words) {
    auto e = lookup_vector(table, w, policy);
    if (!e || e->is_zero()) continue;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += e->values[i];
    ++out.resolved;
  }
  if (out.resolved > 0) {
    for (double& x : out.values) x /= static_cast<double>(out.resolved);
  }
  return out;
}

inline double score_pair(std::span<const std::string> premise_words,
                         std::span<const std::string> answer_words, const EmbeddingTable& table,
                         const OovPolicy& policy = {}) {
  SequenceEmbedding p = embed_sequence(premise_words, table, policy);
  SequenceEmbedding a = embed_sequence(answer_words, table, policy);
  if (p.is_zero() || a.is_zero()) return 0.0;
  return cosine(p.values, a.values);
}

struct ScoreVector {
  std::vector<double> y;
};

// softmax(scores / temperature), max-shifted for stability.
inline ScoreVector likelihoods(std::span<const double> scores, const ScorerConfig& cfg = {}) {
  cfg.validate();
  if (scores.size() < 2) {
    throw Error(ErrorKind::bad_cardinality,
                "need at least two alternatives, got " + std::to_string(scores.size()));
  }
  double top = *std::max_element(scores.begin(), scores.end());
  ScoreVector out;
  out.y.reserve(scores.size());
  double sum = 0.0;
  for (double s : scores) {
    double e = std::exp((s - top) / cfg.temperature);
    out.y.push_back(e);
    sum += e;
  }
  for (double& v : out.y) v /= sum;
  return out;
}

struct Choice {
  std::size_t index = 0;  // 0-based
  bool tie = false;
};

// Highest likelihood; exact ties go to the lowest index and are flagged.
inline Choice choose(const ScoreVector& v) {
  Choice c;
  for (std::size_t i = 1; i < v.y.size(); ++i) {
    if (v.y[i] > v.y[c.index]) c.index = i;
  }
  for (std::size_t i = 0; i < v.y.size(); ++i) {
    if (i != c.index && v.y[i] == v.y[c.index]) c.tie = true;
  }
  return c;
}

}  // namespace corg

#endif  // CORG_SCORER_HPP
