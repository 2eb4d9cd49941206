#ifndef CORG_PIPELINE_HPP
#define CORG_PIPELINE_HPP

#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "corg/clausify.hpp"
#include "corg/copa.hpp"
#include "corg/embeddings.hpp"
#include "corg/error.hpp"
#include "corg/kg_store.hpp"
#include "corg/model_builder.hpp"
#include "corg/scorer.hpp"
#include "corg/selection.hpp"
#include "corg/tptp.hpp"
#include "corg/translate.hpp"

namespace corg {

struct PipelineConfig {
  Scheme scheme = Scheme::existential;
  bool inverse = false;
  bool prefilter = true;
  PrefilterConfig prefilter_cfg;
  SineConfig sine;
  BuilderConfig builder;
  ScorerConfig scorer;
  ExtractionConfig extraction{true, true, {kTextConstant}};
  OovPolicy oov;
  TextSource text;
  bool timings = false;
};

// Loaded once, shared read-only by every problem (and thread).
class Resources {
 public:
  Resources(const KnowledgeGraph& graph, const EmbeddingTable& table, const OovPolicy& policy,
            bool include_subjects = false)
      : graph_(&graph), table_(&table), vectors_(table, policy) {
    for (const auto& t : graph.triples()) {
      vectors_.add(t.object.name);
      if (include_subjects) vectors_.add(t.subject.name);
    }
  }

  const KnowledgeGraph& graph() const noexcept { return *graph_; }
  const EmbeddingTable& table() const noexcept { return *table_; }
  const UnitVectors& vectors() const noexcept { return vectors_; }
  const OovPolicy& policy() const noexcept { return vectors_.policy(); }

 private:
  const KnowledgeGraph* graph_;
  const EmbeddingTable* table_;
  UnitVectors vectors_;
};

struct TextResult {
  std::string role;  // "p", "a1", "a2", ...
  std::string text;
  TextTheory theory;
  std::set<std::string> goal_symbols;
  std::vector<std::size_t> selected;  // positions into ProblemResult::axioms
  PartialModel model;
  std::vector<std::string> symbols;
};

struct ProblemResult {
  CopaProblem problem;
  std::vector<std::string> problem_words;
  std::vector<std::size_t> kept_triples;  // graph ids
  TranslationResult translation;
  TextResult premise;
  std::vector<TextResult> alternatives;
  std::vector<double> scores;
  ScoreVector y;
  Choice choice;
  double seconds = 0.0;

  bool correct() const { return problem.gold && *problem.gold == choice.index; }
};

namespace detail {

inline Error stage_error(long long id, const char* stage, const std::exception& e) {
  ErrorKind kind = ErrorKind::io;
  if (const auto* ce = dynamic_cast<const Error*>(&e)) kind = ce->kind();
  // Strip our own "Kind: " prefix so it is not repeated.
  std::string what = e.what();
  std::string prefix = std::string(to_string(kind)) + ": ";
  if (what.starts_with(prefix)) what = what.substr(prefix.size());
  return Error(kind, "problem " + std::to_string(id) + ", stage " + stage + ": " + what);
}

template <class F>
auto stage(long long id, const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw stage_error(id, name, e);
  }
}

inline std::vector<std::string> fact_words(std::span<const GroundAtom> facts,
                                           const ExtractionConfig& cfg) {
  PartialModel m = saturate(facts, {}, BuilderConfig{});
  return extract_symbols(m, cfg);
}

}  // namespace detail

// prefilter -> translate -> select -> clausify -> saturate -> extract for
// each text, then score every alternative against the premise.
inline ProblemResult run_problem(const CopaProblem& p, const Resources& res,
                                 const PipelineConfig& cfg) {
  auto started = std::chrono::steady_clock::now();
  ProblemResult r;
  r.problem = p;
  const long long id = p.id;

  r.premise.role = sidecar_role(TextRole::premise);
  r.premise.text = p.premise;
  for (std::size_t k = 0; k < p.alternatives.size(); ++k) {
    TextResult t;
    t.role = sidecar_role(TextRole::alternative, k);
    t.text = p.alternatives[k];
    r.alternatives.push_back(std::move(t));
  }
  std::vector<TextResult*> texts{&r.premise};
  for (auto& a : r.alternatives) texts.push_back(&a);

  detail::stage(id, "facts", [&] {
    for (TextResult* t : texts) t->theory = text_to_facts(t->text, cfg.text, id, t->role);
  });

  // Problem words: the word-like symbols of every text's input facts.
  {
    std::set<std::string> seen;
    for (TextResult* t : texts) {
      for (auto& w : detail::fact_words(t->theory.facts, cfg.extraction)) {
        if (seen.insert(w).second) r.problem_words.push_back(std::move(w));
      }
    }
  }

  const auto& triples = res.graph().triples();
  detail::stage(id, "prefilter", [&] {
    if (!cfg.prefilter) {
      r.kept_triples.resize(triples.size());
      for (std::size_t i = 0; i < triples.size(); ++i) r.kept_triples[i] = i;
    } else if (!r.problem_words.empty()) {
      r.kept_triples =
          triple_prefilter_ids(triples, r.problem_words, cfg.prefilter_cfg, res.vectors());
    }
  });

  std::vector<Triple> kept;
  kept.reserve(r.kept_triples.size());
  for (std::size_t i : r.kept_triples) kept.push_back(triples[i]);
  r.translation = detail::stage(id, "translate", [&] {
    return translate_triples(kept, r.kept_triples, cfg.scheme, cfg.inverse);
  });

  std::vector<fol::Formula> formulas;
  formulas.reserve(r.translation.axioms.size());
  for (const auto& a : r.translation.axioms) formulas.push_back(a.formula);
  AxiomIndex index(formulas);
  std::vector<std::optional<std::vector<fol::Clause>>> clause_cache(formulas.size());

  for (TextResult* t : texts) {
    for (const auto& f : t->theory.facts) fol::collect_symbols(f, t->goal_symbols);
    detail::stage(id, "select", [&] {
      if (!t->goal_symbols.empty()) {
        t->selected = similarity_sine_select(index, t->goal_symbols, cfg.sine, res.vectors());
      }
    });
    std::vector<fol::Clause> clauses = t->theory.rules;
    detail::stage(id, "clausify", [&] {
      fol::ArityTable arities;
      for (const auto& f : t->theory.facts) arities.add(f);
      for (std::size_t a : t->selected) {
        arities.add(formulas[a]);
        if (!clause_cache[a]) clause_cache[a] = fol::clausify(formulas[a], r.translation.axioms[a].id);
        clauses.insert(clauses.end(), clause_cache[a]->begin(), clause_cache[a]->end());
      }
    });
    t->model = detail::stage(id, "saturate", [&] {
      return saturate(t->theory.facts, clauses, cfg.builder);
    });
    t->symbols = extract_symbols(t->model, cfg.extraction);
  }

  detail::stage(id, "score", [&] {
    for (const auto& a : r.alternatives) {
      r.scores.push_back(score_pair(r.premise.symbols, a.symbols, res.table(), res.policy()));
    }
    r.y = likelihoods(r.scores, cfg.scorer);
    r.choice = choose(r.y);
  });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

struct RunReport {
  std::vector<ProblemResult> results;  // in input order

  std::size_t labeled() const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.problem.gold.has_value();
    return n;
  }
  std::size_t correct() const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.correct();
    return n;
  }
  // Absent when no problem carries a gold label.
  std::optional<double> accuracy() const {
    std::size_t l = labeled();
    if (l == 0) return std::nullopt;
    return static_cast<double>(correct()) / static_cast<double>(l);
  }
};

// Problems are independent; with jobs > 1 they run on worker threads and
// the report keeps input order. The first failing problem (in input order)
// is rethrown.
inline RunReport evaluate(std::span<const CopaProblem> problems, const Resources& res,
                          const PipelineConfig& cfg, unsigned jobs = 1) {
  RunReport report;
  report.results.resize(problems.size());
  std::vector<std::exception_ptr> errors(problems.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < problems.size(); i = next++) {
      try {
        report.results[i] = run_problem(problems[i], res, cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(problems.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return report;
}

// ---- reporting -----------------------------------------------------------

inline nlohmann::json text_json(const TextResult& t) {
  return {{"role", t.role},
          {"facts", t.theory.facts.size()},
          {"selected_axioms", t.selected.size()},
          {"atoms", t.model.size()},
          {"complete", t.model.complete()},
          {"symbols", t.symbols}};
}

inline nlohmann::json problem_json(const ProblemResult& r, bool timings = false) {
  nlohmann::json texts = nlohmann::json::array();
  texts.push_back(text_json(r.premise));
  for (const auto& a : r.alternatives) texts.push_back(text_json(a));
  nlohmann::json j = {
      {"id", r.problem.id},
      {"asks_for", to_string(r.problem.question)},
      {"gold", r.problem.gold ? nlohmann::json(*r.problem.gold + 1) : nlohmann::json(nullptr)},
      {"chosen", r.choice.index + 1},
      {"tie", r.choice.tie},
      {"correct", r.problem.gold ? nlohmann::json(r.correct()) : nlohmann::json(nullptr)},
      {"scores", r.scores},
      {"y", r.y.y},
      {"kept_triples", r.kept_triples.size()},
      {"axioms", r.translation.axioms.size()},
      {"dropped_negated", r.translation.dropped_negated},
      {"texts", texts},
  };
  if (timings) j["seconds"] = r.seconds;
  return j;
}

inline nlohmann::json aggregate_json(const RunReport& report) {
  auto acc = report.accuracy();
  return {{"aggregate",
           {{"problems", report.results.size()},
            {"labeled", report.labeled()},
            {"correct", report.correct()},
            {"accuracy", acc ? nlohmann::json(*acc) : nlohmann::json(nullptr)}}}};
}

// One JSON object per problem, then the aggregate, one per line.
inline std::string report_jsonl(const RunReport& report, bool timings = false) {
  std::string out;
  for (const auto& r : report.results) {
    out += problem_json(r, timings).dump();
    out.push_back('\n');
  }
  out += aggregate_json(report).dump();
  out.push_back('\n');
  return out;
}

// ---- exports and explanations ---------------------------------------------

enum class ExportStage { translated, selected, model };

inline std::string text_tptp(const ProblemResult& r, const TextResult& t, ExportStage stage) {
  std::string out = "% problem " + std::to_string(r.problem.id) + ", text " + t.role + "\n";
  if (stage == ExportStage::model) return out + model_to_tptp(t.model);
  if (t.theory.formula) {
    out += fol::to_tptp(*t.theory.formula, kTextAxiomId, "hypothesis") + "\n";
  } else {
    for (std::size_t i = 0; i < t.theory.facts.size(); ++i) {
      out += fol::to_tptp(fol::Formula::make_atom(t.theory.facts[i]), "fact" + std::to_string(i),
                          "hypothesis") +
             "\n";
    }
  }
  for (const auto& rule : t.theory.rules) {
    out += fol::to_tptp(rule, rule.origin + "_rule", "hypothesis") + "\n";
  }
  auto emit = [&](std::size_t a) {
    const Axiom& ax = r.translation.axioms[a];
    out += fol::to_tptp(ax.formula, ax.id, "axiom") + "\n";
  };
  if (stage == ExportStage::translated) {
    for (std::size_t a = 0; a < r.translation.axioms.size(); ++a) emit(a);
  } else {
    for (std::size_t a : t.selected) emit(a);
  }
  return out;
}

// Writes <dir>/<id>_<role>.p for every text; returns the paths.
inline std::vector<std::filesystem::path> export_tptp(const ProblemResult& r, ExportStage stage,
                                                      const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto one = [&](const TextResult& t) {
    auto path = dir / (std::to_string(r.problem.id) + "_" + t.role + ".p");
    io::write_file(path.string(), text_tptp(r, t, stage));
    written.push_back(path);
  };
  one(r.premise);
  for (const auto& a : r.alternatives) one(a);
  return written;
}

// Derivation trees for the derived concept atoms of the chosen
// alternative's model (at most `limit` of them).
inline std::string explain_choice(const ProblemResult& r, std::size_t limit = 10) {
  const TextResult& t = r.alternatives.at(r.choice.index);
  std::string out = "problem " + std::to_string(r.problem.id) + ": chose alternative " +
                    std::to_string(r.choice.index + 1) + " (\"" + t.text + "\")" +
                    (r.choice.tie ? " [tie]" : "") + "\n";
  std::size_t shown = 0;
  for (std::size_t i = t.model.input_count(); i < t.model.size() && shown < limit; ++i) {
    const GroundAtom& a = t.model.atom(i);
    if (is_relation_predicate(a)) continue;
    out += explain(t.model, a);
    ++shown;
  }
  if (shown == 0) out += "no derivations; the model holds only the input facts\n";
  return out;
}

}  // namespace corg

#endif  // CORG_PIPELINE_HPP
