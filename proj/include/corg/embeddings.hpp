#ifndef CORG_EMBEDDINGS_HPP
#define CORG_EMBEDDINGS_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corg/error.hpp"
#include "corg/io.hpp"

namespace corg {

using Vector = std::vector<double>;

// word -> fixed-length vector. Components are stored as float (the usual
// precision of published tables); all arithmetic is done in double.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 300) : dim_(dimension) {
    if (dim_ == 0) throw Error(ErrorKind::invalid_config, "embedding dimension must be positive");
  }

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return rows_.size(); }

  // Returns true when the word was already present (last write wins).
  bool insert(std::string_view word, std::span<const double> values) {
    if (values.size() != dim_) {
      throw Error(ErrorKind::dimension_mismatch, "vector for '" + std::string(word) + "' has " +
                                                     std::to_string(values.size()) +
                                                     " components, table dimension is " +
                                                     std::to_string(dim_));
    }
    std::string key = io::to_lower(word);
    auto [it, inserted] = rows_.emplace(std::move(key), data_.size() / dim_);
    if (inserted) {
      data_.resize(data_.size() + dim_);
    }
    float* row = data_.data() + it->second * dim_;
    for (std::size_t i = 0; i < dim_; ++i) row[i] = static_cast<float>(values[i]);
    return !inserted;
  }

  bool insert(std::string_view word, std::initializer_list<double> values) {
    return insert(word, std::span<const double>(values.begin(), values.size()));
  }

  // Keys are lowercase; the probe is lowercased before lookup.
  std::optional<Vector> find(std::string_view word) const {
    auto it = rows_.find(lower_if_needed(word));
    if (it == rows_.end()) return std::nullopt;
    const float* row = data_.data() + it->second * dim_;
    return Vector(row, row + dim_);
  }

  bool contains(std::string_view word) const { return rows_.contains(lower_if_needed(word)); }

  EmbeddingTable scaled(double alpha) const {
    EmbeddingTable out = *this;
    for (float& v : out.data_) v = static_cast<float>(v * alpha);
    return out;
  }

 private:
  static std::string lower_if_needed(std::string_view w) {
    for (char c : w) {
      if (std::isupper(static_cast<unsigned char>(c))) return io::to_lower(w);
    }
    return std::string(w);
  }

  std::size_t dim_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> rows_;
};

struct TableLoadStats {
  std::size_t entries = 0;
  std::size_t duplicates = 0;
  std::size_t skipped_other_language = 0;
  bool had_header = false;
};

struct TableLoadResult {
  EmbeddingTable table;
  TableLoadStats stats;
};

// Text format: optional "<count> <dim>" header, then "word v1 ... v_dim" per
// line. Without a header the first vector fixes the dimension. Keys of the
// form /c/en/word are reduced to word; other /c/<lang>/ entries are skipped.
inline TableLoadResult load_table(const std::string& path) {
  io::LineReader reader(path);
  std::string line;
  std::optional<EmbeddingTable> table;
  TableLoadStats stats;
  std::vector<double> values;
  bool first = true;
  while (reader.next(line)) {
    std::string_view view = io::trim(line);
    if (view.empty()) continue;
    std::size_t n = reader.line_number();
    auto sp = view.find(' ');
    if (first) {
      first = false;
      auto fields = io::split(view, ' ');
      if (fields.size() == 2 && io::parse_int(fields[0]) && io::parse_int(fields[1])) {
        long long dim = *io::parse_int(fields[1]);
        if (dim <= 0) {
          throw PositionedError(ErrorKind::dimension_mismatch, n, path + ": bad header dimension");
        }
        table.emplace(static_cast<std::size_t>(dim));
        stats.had_header = true;
        continue;
      }
    }
    if (sp == std::string_view::npos) {
      throw PositionedError(ErrorKind::dimension_mismatch, n,
                            path + ":" + std::to_string(n) + ": word without a vector");
    }
    std::string_view word = view.substr(0, sp);
    values.clear();
    std::string_view rest = view.substr(sp + 1);
    while (!rest.empty()) {
      auto next = rest.find(' ');
      std::string_view tok = rest.substr(0, next);
      if (!tok.empty()) {
        auto v = io::parse_double(tok);
        if (!v) {
          throw PositionedError(ErrorKind::dimension_mismatch, n,
                                path + ":" + std::to_string(n) + ": bad component '" +
                                    std::string(tok) + "'");
        }
        values.push_back(*v);
      }
      if (next == std::string_view::npos) break;
      rest.remove_prefix(next + 1);
    }
    if (!table) table.emplace(values.size());
    if (values.size() != table->dimension()) {
      throw PositionedError(ErrorKind::dimension_mismatch, n,
                            path + ":" + std::to_string(n) + ": expected " +
                                std::to_string(table->dimension()) + " components, got " +
                                std::to_string(values.size()));
    }
    if (word.starts_with("/c/")) {
      auto parts = io::split(word, '/');
      if (parts.size() < 4 || parts[2] != "en") {
        ++stats.skipped_other_language;
        continue;
      }
      word = parts[3];
    }
    if (table->insert(word, values)) ++stats.duplicates;
  }
  if (!table) table.emplace(300);
  stats.entries = table->size();
  return TableLoadResult{std::move(*table), stats};
}

enum class OovMode { split_average, zero, error };

struct OovPolicy {
  OovMode mode = OovMode::split_average;
  // What split_average does when no part is in the vocabulary: zero or error.
  OovMode fallback = OovMode::zero;
};

enum class Resolution { direct, split, zero_fallback };

struct Embedded {
  Vector values;
  Resolution resolution = Resolution::direct;
  bool is_zero() const noexcept { return resolution == Resolution::zero_fallback; }
};

// "astronomicalBody" -> astronomical, body; "annoy_your_spouse" -> annoy,
// your, spouse. Parts are lowercased.
inline std::vector<std::string> split_token(std::string_view token) {
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) parts.push_back(io::to_lower(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    unsigned char u = static_cast<unsigned char>(c);
    if (c == '_' || c == '-' || c == ' ') {
      flush();
      continue;
    }
    if (std::isupper(u) && i > 0) {
      unsigned char prev = static_cast<unsigned char>(token[i - 1]);
      bool next_lower = i + 1 < token.size() &&
                        std::islower(static_cast<unsigned char>(token[i + 1]));
      // fooBar | fooBAR | FOOBar: boundary before the capital.
      if (std::islower(prev) || std::isdigit(prev) || (std::isupper(prev) && next_lower)) flush();
    }
    cur.push_back(c);
  }
  flush();
  return parts;
}

// nullopt is the Absent outcome (mode error, or split_average falling back
// to error).
inline std::optional<Embedded> lookup_vector(const EmbeddingTable& table, std::string_view token,
                                      const OovPolicy& policy = {}) {
  if (auto hit = table.find(token)) return Embedded{std::move(*hit), Resolution::direct};
  auto zero = [&]() -> std::optional<Embedded> {
    return Embedded{Vector(table.dimension(), 0.0), Resolution::zero_fallback};
  };
  switch (policy.mode) {
    case OovMode::zero:
      return zero();
    case OovMode::error:
      return std::nullopt;
    case OovMode::split_average:
      break;
  }
  Vector sum(table.dimension(), 0.0);
  std::size_t found = 0;
  for (const auto& part : split_token(token)) {
    if (auto v = table.find(part)) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
      ++found;
    }
  }
  if (found == 0) {
    if (policy.fallback == OovMode::error) return std::nullopt;
    return zero();
  }
  for (double& x : sum) x /= static_cast<double>(found);
  return Embedded{std::move(sum), Resolution::split};
}

inline double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// 0 when either vector has zero norm; clamped to [-1, 1].
inline double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::dimension_mismatch, "cosine of vectors with " +
                                                   std::to_string(u.size()) + " and " +
                                                   std::to_string(v.size()) + " components");
  }
  double nu = norm(u);
  double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

// Unit-length vectors per word, so that cosine becomes a dot product. Words
// that resolve to nothing (Absent, or the zero fallback) map to an empty
// vector and score 0 against everything.
class UnitVectors {
 public:
  UnitVectors(const EmbeddingTable& table, OovPolicy policy) : table_(&table), policy_(policy) {}

  void add(std::string_view word) {
    if (cache_.contains(std::string(word))) return;
    cache_.emplace(std::string(word), compute(word));
  }

  // Cached if add()ed, computed on the fly otherwise.
  Vector get(std::string_view word) const {
    auto it = cache_.find(std::string(word));
    if (it != cache_.end()) return it->second;
    return compute(word);
  }

  const Vector* cached(std::string_view word) const {
    auto it = cache_.find(std::string(word));
    return it == cache_.end() ? nullptr : &it->second;
  }

  static double similarity(const Vector& a, const Vector& b) {
    if (a.empty() || b.empty()) return 0.0;
    return std::clamp(dot(a, b), -1.0, 1.0);
  }

  const EmbeddingTable& table() const noexcept { return *table_; }
  const OovPolicy& policy() const noexcept { return policy_; }

 private:
  Vector compute(std::string_view word) const {
    auto e = lookup_vector(*table_, word, policy_);
    if (!e || e->is_zero()) return {};
    double n = norm(e->values);
    if (n == 0.0) return {};
    for (double& x : e->values) x /= n;
    return std::move(e->values);
  }

  const EmbeddingTable* table_;
  OovPolicy policy_;
  std::unordered_map<std::string, Vector> cache_;
};

}  // namespace corg

#endif  // CORG_EMBEDDINGS_HPP
