#ifndef CORG_KG_STORE_HPP
#define CORG_KG_STORE_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "corg/error.hpp"
#include "corg/io.hpp"

namespace corg {

template <class Tag>
struct Identifier {
  std::string name;

  Identifier() = default;
  explicit Identifier(std::string n) : name(std::move(n)) {}

  auto operator<=>(const Identifier&) const = default;
  bool operator==(const Identifier&) const = default;
};

using ConceptId = Identifier<struct ConceptTag>;
using RelationId = Identifier<struct RelationTag>;

}  // namespace corg

template <class Tag>
struct std::hash<corg::Identifier<Tag>> {
  std::size_t operator()(const corg::Identifier<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.name);
  }
};

namespace corg {

struct Triple {
  ConceptId subject;
  RelationId relation;
  ConceptId object;
  bool negated = false;
  double weight = 1.0;
  std::size_t source_line = 0;

  bool operator==(const Triple&) const = default;
};

// CamelCase relation names become snake_case; a leading "Not" (followed by
// an uppercase letter) or "not_" is split off into the negation flag.
struct NormalizedRelation {
  RelationId id;
  bool negated = false;
};

inline NormalizedRelation normalize_relation(std::string_view raw) {
  raw = io::trim(raw);
  if (raw.starts_with("/r/")) raw.remove_prefix(3);
  NormalizedRelation out;
  if (raw.size() > 3 && raw.starts_with("Not") &&
      std::isupper(static_cast<unsigned char>(raw[3]))) {
    out.negated = true;
    raw.remove_prefix(3);
  } else if (raw.size() > 4 && raw.starts_with("not_")) {
    out.negated = true;
    raw.remove_prefix(4);
  }
  std::string name;
  name.reserve(raw.size() + 4);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    if (c == '/' || c == ' ' || c == '-') {
      name.push_back('_');
      continue;
    }
    if (std::isupper(c)) {
      if (i > 0) {
        unsigned char prev = static_cast<unsigned char>(raw[i - 1]);
        if (std::islower(prev) || std::isdigit(prev)) name.push_back('_');
      }
      name.push_back(static_cast<char>(std::tolower(c)));
    } else {
      name.push_back(static_cast<char>(c));
    }
  }
  out.id = RelationId(std::move(name));
  return out;
}

// Lowercase, spaces to underscores. Multiword concepts stay one identifier.
inline ConceptId normalize_concept_term(std::string_view term) {
  std::string out = io::to_lower(io::trim(term));
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return ConceptId(std::move(out));
}

struct RelationFilter {
  // nullopt admits every relation.
  std::optional<std::set<RelationId>> allowed;
  bool drop_negated = false;
  std::set<std::string> languages{"en"};

  void validate() const {
    if (allowed && allowed->empty()) {
      throw Error(ErrorKind::invalid_config, "relation whitelist is empty");
    }
  }

  bool admits(const RelationId& r) const {
    return !allowed || allowed->contains(r);
  }
};

inline const std::vector<std::string>& default_relation_names() {
  static const std::vector<std::string> names{
      "is_a",          "part_of",          "capable_of",
      "desires",       "causes",           "at_location",
      "has_subevent",  "used_for",         "has_property",
      "has_prerequisite", "motivated_by_goal", "receives_action",
      "made_of",       "antonym",
  };
  return names;
}

inline RelationFilter default_relation_filter() {
  RelationFilter f;
  f.allowed.emplace();
  for (const auto& n : default_relation_names()) f.allowed->insert(RelationId(n));
  return f;
}

// One relation id per line, '#' comments; entries are normalized, so both
// "AtLocation" and "at_location" work.
inline std::set<RelationId> load_relation_whitelist(const std::string& path) {
  io::LineReader reader(path);
  std::set<RelationId> out;
  std::string line;
  while (reader.next(line)) {
    auto body = io::trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    out.insert(normalize_relation(body).id);
  }
  if (out.empty()) {
    throw Error(ErrorKind::invalid_config, "no relations listed in " + path);
  }
  return out;
}

enum class SkipReason {
  blank,
  external_url,
  non_concept,
  language,
  relation_filtered,
  negated_dropped,
  malformed,
};

inline const char* to_string(SkipReason r) {
  switch (r) {
    case SkipReason::blank: return "blank";
    case SkipReason::external_url: return "external_url";
    case SkipReason::non_concept: return "non_concept";
    case SkipReason::language: return "language";
    case SkipReason::relation_filtered: return "relation_filtered";
    case SkipReason::negated_dropped: return "negated_dropped";
    case SkipReason::malformed: return "malformed";
  }
  return "unknown";
}

struct Skip {
  SkipReason reason;
  bool operator==(const Skip&) const = default;
};

using ParseOutcome = std::variant<Triple, Skip>;

namespace detail {

struct ParsedConcept {
  std::string language;
  ConceptId id;
};

// nullopt for URIs that are not concepts at all (URLs, /d/ datasets, ...).
inline std::optional<ParsedConcept> parse_concept_uri(std::string_view uri,
                                                      std::size_t line_number) {
  uri = io::trim(uri);
  if (!uri.starts_with("/c/")) return std::nullopt;
  auto parts = io::split(uri, '/');
  // "", "c", lang, term, [pos, ...]
  if (parts.size() < 4 || parts[2].empty() || parts[3].empty()) {
    throw PositionedError(ErrorKind::malformed_line, line_number,
                          "line " + std::to_string(line_number) +
                              ": unparseable concept URI '" + std::string(uri) + "'");
  }
  return ParsedConcept{std::string(parts[2]), normalize_concept_term(parts[3])};
}

inline Skip apply_filter(const Triple& t, const RelationFilter& filter,
                         bool& pass) {
  pass = false;
  if (!filter.admits(t.relation)) return Skip{SkipReason::relation_filtered};
  if (t.negated && filter.drop_negated) return Skip{SkipReason::negated_dropped};
  pass = true;
  return Skip{SkipReason::blank};
}

inline PositionedError malformed(std::size_t line_number, const std::string& why) {
  return PositionedError(ErrorKind::malformed_line, line_number,
                         "line " + std::to_string(line_number) + ": " + why);
}

}  // namespace detail

// One record of a ConceptNet assertions dump:
//   assertion-URI \t relation-URI \t start-URI \t end-URI \t JSON metadata
// Throws MalformedLine (a PositionedError carrying line_number).
inline ParseOutcome parse_assertion_line(std::string_view line,
                                         std::size_t line_number = 0,
                                         const RelationFilter& filter = {}) {
  auto fields = io::split(line, '\t');
  if (fields.size() != 5) {
    throw detail::malformed(line_number, "expected 5 tab-separated fields, got " +
                                             std::to_string(fields.size()));
  }
  auto rel_uri = io::trim(fields[1]);
  if (!rel_uri.starts_with("/r/") || rel_uri.size() == 3) {
    throw detail::malformed(line_number,
                            "unparseable relation URI '" + std::string(rel_uri) + "'");
  }
  NormalizedRelation rel = normalize_relation(rel_uri);
  if (rel.id.name == "external_url") return Skip{SkipReason::external_url};

  auto start = detail::parse_concept_uri(fields[2], line_number);
  auto end = detail::parse_concept_uri(fields[3], line_number);
  if (!start || !end) return Skip{SkipReason::non_concept};
  if (!filter.languages.contains(start->language) ||
      !filter.languages.contains(end->language)) {
    return Skip{SkipReason::language};
  }

  Triple t;
  t.subject = std::move(start->id);
  t.relation = std::move(rel.id);
  t.object = std::move(end->id);
  t.negated = rel.negated;
  t.source_line = line_number;

  auto meta_text = io::trim(fields[4]);
  if (!meta_text.empty()) {
    auto meta = nlohmann::json::parse(meta_text, nullptr, false);
    if (meta.is_discarded() || !meta.is_object()) {
      throw detail::malformed(line_number, "metadata is not a JSON object");
    }
    if (auto it = meta.find("weight"); it != meta.end()) {
      if (!it->is_number() || it->get<double>() < 0.0) {
        throw detail::malformed(line_number, "weight must be a nonnegative number");
      }
      t.weight = it->get<double>();
    }
  }

  bool pass = false;
  Skip s = detail::apply_filter(t, filter, pass);
  if (!pass) return s;
  return t;
}

// Plain fixture format: subject \t relation \t object [\t weight]. Blank
// lines and '#' comments yield Skip{blank}.
inline ParseOutcome parse_fixture_line(std::string_view line,
                                       std::size_t line_number = 0,
                                       const RelationFilter& filter = {}) {
  auto body = io::trim(line);
  if (body.empty() || body.front() == '#') return Skip{SkipReason::blank};
  auto fields = io::split(body, '\t');
  if (fields.size() != 3 && fields.size() != 4) {
    throw detail::malformed(line_number, "expected 3 or 4 tab-separated fields, got " +
                                             std::to_string(fields.size()));
  }
  NormalizedRelation rel = normalize_relation(fields[1]);
  if (rel.id.name.empty()) throw detail::malformed(line_number, "empty relation");
  if (rel.id.name == "external_url") return Skip{SkipReason::external_url};

  auto term = [&](std::string_view f) -> std::optional<ConceptId> {
    f = io::trim(f);
    if (f.starts_with("/c/")) {
      auto c = detail::parse_concept_uri(f, line_number);
      if (!filter.languages.contains(c->language)) return std::nullopt;
      return c->id;
    }
    if (f.find("://") != std::string_view::npos) return ConceptId{};
    return normalize_concept_term(f);
  };
  auto s = term(fields[0]);
  auto o = term(fields[2]);
  if (!s || !o) return Skip{SkipReason::language};
  if (s->name.empty() || o->name.empty()) return Skip{SkipReason::non_concept};

  Triple t;
  t.subject = std::move(*s);
  t.relation = std::move(rel.id);
  t.object = std::move(*o);
  t.negated = rel.negated;
  t.source_line = line_number;
  if (fields.size() == 4) {
    auto w = io::parse_double(fields[3]);
    if (!w || *w < 0.0) throw detail::malformed(line_number, "bad weight");
    t.weight = *w;
  }
  bool pass = false;
  Skip skip = detail::apply_filter(t, filter, pass);
  if (!pass) return skip;
  return t;
}

// Immutable once constructed; safe to share across reader threads.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  explicit KnowledgeGraph(std::vector<Triple> triples) : triples_(std::move(triples)) {
    for (std::size_t i = 0; i < triples_.size(); ++i) {
      out_index_[triples_[i].subject.name].push_back(i);
      in_index_[triples_[i].object.name].push_back(i);
    }
  }

  const std::vector<Triple>& triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  std::span<const std::size_t> out_ids(const ConceptId& c) const {
    return lookup(out_index_, c);
  }
  std::span<const std::size_t> in_ids(const ConceptId& c) const {
    return lookup(in_index_, c);
  }

  std::size_t out_degree(const ConceptId& c) const { return out_ids(c).size(); }
  std::size_t in_degree(const ConceptId& c) const { return in_ids(c).size(); }

  std::vector<Triple> neighbors_out(const ConceptId& c) const { return collect(out_ids(c)); }
  std::vector<Triple> neighbors_in(const ConceptId& c) const { return collect(in_ids(c)); }

  const std::unordered_map<std::string, std::vector<std::size_t>>& out_index() const {
    return out_index_;
  }
  const std::unordered_map<std::string, std::vector<std::size_t>>& in_index() const {
    return in_index_;
  }

 private:
  using Index = std::unordered_map<std::string, std::vector<std::size_t>>;

  static std::span<const std::size_t> lookup(const Index& idx, const ConceptId& c) {
    auto it = idx.find(c.name);
    if (it == idx.end()) return {};
    return it->second;
  }

  std::vector<Triple> collect(std::span<const std::size_t> ids) const {
    std::vector<Triple> out;
    out.reserve(ids.size());
    for (std::size_t id : ids) out.push_back(triples_[id]);
    return out;
  }

  std::vector<Triple> triples_;
  Index out_index_;
  Index in_index_;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t kept = 0;
  std::map<SkipReason, std::size_t> skipped;
  // First few MalformedLine messages, for diagnostics.
  std::vector<std::string> malformed_samples;

  std::size_t skipped_count(SkipReason r) const {
    auto it = skipped.find(r);
    return it == skipped.end() ? 0 : it->second;
  }
};

struct LoadResult {
  KnowledgeGraph graph;
  LoadStats stats;
};

// Accepts the 5-field assertions dump and the plain fixture format, line by
// line (a 5-field line whose second field starts with /r/ is a dump record).
// Malformed lines are counted, never fatal.
inline LoadResult load_graph(const std::string& path, const RelationFilter& filter = {}) {
  filter.validate();
  io::LineReader reader(path);
  LoadStats stats;
  std::vector<Triple> kept;
  std::string line;
  constexpr std::size_t kMaxSamples = 10;
  while (reader.next(line)) {
    ++stats.lines;
    std::size_t n = reader.line_number();
    try {
      ParseOutcome outcome;
      std::string_view view(line);
      std::size_t tabs = static_cast<std::size_t>(std::count(view.begin(), view.end(), '\t'));
      auto second = tabs >= 1 ? io::trim(io::split(view, '\t')[1]) : std::string_view{};
      if (tabs == 4 && second.starts_with("/r/")) {
        outcome = parse_assertion_line(view, n, filter);
      } else {
        outcome = parse_fixture_line(view, n, filter);
      }
      if (auto* t = std::get_if<Triple>(&outcome)) {
        kept.push_back(std::move(*t));
      } else {
        ++stats.skipped[std::get<Skip>(outcome).reason];
      }
    } catch (const PositionedError& e) {
      ++stats.skipped[SkipReason::malformed];
      if (stats.malformed_samples.size() < kMaxSamples) {
        stats.malformed_samples.emplace_back(e.what());
      }
    }
  }
  stats.kept = kept.size();
  if (kept.empty()) {
    throw Error(ErrorKind::no_triples_loaded,
                path + ": no triples passed the filter (" + std::to_string(stats.lines) +
                    " lines read)");
  }
  return LoadResult{KnowledgeGraph(std::move(kept)), std::move(stats)};
}

}  // namespace corg

#endif  // CORG_KG_STORE_HPP
