// corg: command-line driver.
//
//   corg run --copa problems.xml --kg assertions.csv --embeddings vectors.txt [options]
//   corg kg-stats --kg assertions.csv [--concept sun ...]
//
// Exit status: 0 success, 1 a loading or pipeline stage failed, 2 bad arguments.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corg/corg.hpp"

namespace {

constexpr int kStageError = 1;
constexpr int kBadArguments = 2;

struct BadArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string copa;
  std::string kg;
  std::string embeddings;
  std::string relations;
  bool all_relations = false;
  bool keep_negated = false;
  bool inverse = false;
  std::string scheme = "existential";
  double sine_tolerance = 1.5;
  std::size_t sine_depth = 3;
  std::size_t generality_threshold = 0;
  std::optional<double> sim_threshold;
  double prefilter_theta = 0.4;
  bool no_prefilter = false;
  bool prefilter_subjects = false;
  std::size_t max_term_depth = 3;
  std::size_t max_atoms = 10'000;
  std::size_t max_rounds = 100;
  double temperature = 1.0;
  std::string oov = "split";
  std::string fol_dir;
  std::string stopwords;
  std::string report;
  std::string export_tptp;
  std::string export_stage = "selected";
  std::vector<long long> explain;
  unsigned jobs = 1;
  bool timings = false;
  bool quiet = false;
};

struct StatsOptions {
  std::string kg;
  std::string relations;
  bool all_relations = false;
  std::vector<std::string> concepts;
  std::size_t top = 10;
};

corg::RelationFilter relation_filter(const std::string& relations, bool all, bool keep_negated) {
  corg::RelationFilter f = corg::default_relation_filter();
  if (all) f.allowed.reset();
  else if (!relations.empty()) f.allowed = corg::load_relation_whitelist(relations);
  f.drop_negated = !keep_negated;
  return f;
}

void print_load_stats(const std::string& path, const corg::LoadStats& s) {
  std::cerr << path << ": " << s.lines << " lines, " << s.kept << " triples kept";
  for (const auto& [reason, n] : s.skipped) std::cerr << ", " << n << " " << corg::to_string(reason);
  std::cerr << "\n";
  for (const auto& m : s.malformed_samples) std::cerr << "  " << m << "\n";
}

corg::PipelineConfig pipeline_config(const RunOptions& o) {
  corg::PipelineConfig cfg;
  cfg.scheme = o.scheme == "factual" ? corg::Scheme::factual : corg::Scheme::existential;
  cfg.inverse = o.inverse;
  cfg.prefilter = !o.no_prefilter;
  cfg.prefilter_cfg.theta = o.prefilter_theta;
  cfg.prefilter_cfg.include_subject = o.prefilter_subjects;
  cfg.sine.tolerance = o.sine_tolerance;
  cfg.sine.max_depth = o.sine_depth == 0 ? std::nullopt : std::optional<std::size_t>(o.sine_depth);
  cfg.sine.generality_threshold = o.generality_threshold;
  cfg.sine.similarity_threshold = o.sim_threshold;
  cfg.builder = {o.max_term_depth, o.max_atoms, o.max_rounds};
  cfg.scorer.temperature = o.temperature;
  if (o.oov == "zero") cfg.oov.mode = corg::OovMode::zero;
  else if (o.oov == "error") cfg.oov.mode = corg::OovMode::error;
  if (!o.fol_dir.empty()) {
    cfg.text.mode = corg::TextMode::fol_file;
    cfg.text.fol_dir = o.fol_dir;
  }
  cfg.timings = o.timings;

  try {
    cfg.sine.validate();
    cfg.builder.validate();
    cfg.scorer.validate();
  } catch (const corg::Error& e) {
    throw BadArgument(e.what());
  }
  return cfg;
}

corg::ExportStage export_stage(const std::string& s) {
  if (s == "translated") return corg::ExportStage::translated;
  if (s == "model") return corg::ExportStage::model;
  return corg::ExportStage::selected;
}

int run(const RunOptions& o) {
  corg::PipelineConfig cfg = pipeline_config(o);

  auto problems = corg::parse_copa_xml(o.copa);
  for (long long id : o.explain) {
    bool known = std::any_of(problems.begin(), problems.end(),
                             [&](const corg::CopaProblem& p) { return p.id == id; });
    if (!known) throw BadArgument("--explain: no problem with id " + std::to_string(id) + " in " + o.copa);
  }
  if (!o.stopwords.empty()) cfg.text.stopwords = corg::load_stopwords(o.stopwords);

  auto kg = corg::load_graph(o.kg, relation_filter(o.relations, o.all_relations, o.keep_negated));
  if (!o.quiet) print_load_stats(o.kg, kg.stats);
  auto vec = corg::load_table(o.embeddings);
  if (!o.quiet) {
    std::cerr << o.embeddings << ": " << vec.stats.entries << " vectors of dimension "
              << vec.table.dimension() << "\n";
  }

  corg::Resources res(kg.graph, vec.table, cfg.oov, cfg.prefilter_cfg.include_subject);
  corg::RunReport report = corg::evaluate(problems, res, cfg, o.jobs);

  std::string jsonl = corg::report_jsonl(report, cfg.timings);
  if (o.report.empty()) std::cout << jsonl;
  else corg::io::write_file(o.report, jsonl);

  if (!o.export_tptp.empty()) {
    for (const auto& r : report.results) corg::export_tptp(r, export_stage(o.export_stage), o.export_tptp);
  }
  for (long long id : o.explain) {
    for (const auto& r : report.results) {
      if (r.problem.id == id) std::cerr << corg::explain_choice(r);
    }
  }
  if (!o.quiet) {
    auto acc = report.accuracy();
    std::cerr << report.results.size() << " problems, " << report.correct() << "/" << report.labeled()
              << " labeled correct";
    if (acc) std::cerr << ", accuracy " << *acc;
    std::cerr << "\n";
  }
  return 0;
}

int kg_stats(const StatsOptions& o) {
  auto kg = corg::load_graph(o.kg, relation_filter(o.relations, o.all_relations, true));
  print_load_stats(o.kg, kg.stats);
  const auto& g = kg.graph;

  std::map<std::string, std::size_t> per_relation;
  for (const auto& t : g.triples()) ++per_relation[t.relation.name];
  std::cout << "triples " << g.size() << "\n";
  for (const auto& [rel, n] : per_relation) std::cout << "relation " << rel << " " << n << "\n";

  for (const auto& c : o.concepts) {
    corg::ConceptId id = corg::normalize_concept_term(c);
    std::cout << "concept " << id.name << " in " << g.in_degree(id) << " out " << g.out_degree(id)
              << "\n";
  }

  std::vector<std::pair<std::size_t, std::string>> by_out;
  for (const auto& [name, ids] : g.out_index()) by_out.emplace_back(ids.size(), name);
  std::sort(by_out.begin(), by_out.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t i = 0; i < std::min(o.top, by_out.size()); ++i) {
    const auto& name = by_out[i].second;
    corg::ConceptId id(name);
    std::cout << "top " << name << " in " << g.in_degree(id) << " out " << g.out_degree(id) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CoRg: commonsense reasoning over COPA with a knowledge graph"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "score COPA problems");
  run_cmd->add_option("--copa", ro.copa, "COPA XML file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--kg", ro.kg, "ConceptNet assertions dump or fixture triples (.gz ok)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--embeddings", ro.embeddings, "word vectors, text format (.gz ok)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* rel = run_cmd->add_option("--relations", ro.relations, "relation whitelist file")
                  ->check(CLI::ExistingFile);
  run_cmd->add_flag("--all-relations", ro.all_relations, "no relation whitelist")->excludes(rel);
  run_cmd->add_flag("--keep-negated", ro.keep_negated,
                    "load Not* relations (they are still dropped at translation)");
  run_cmd->add_flag("--inverse", ro.inverse, "also emit inverse axioms");
  run_cmd->add_option("--scheme", ro.scheme, "translation scheme")
      ->check(CLI::IsMember({"factual", "existential"}));
  run_cmd->add_option("--sine-tolerance", ro.sine_tolerance, "SInE tolerance (>= 1)");
  run_cmd->add_option("--sine-depth", ro.sine_depth, "SInE depth limit, 0 for none");
  run_cmd->add_option("--generality-threshold", ro.generality_threshold,
                      "SInE generality threshold, 0 for none");
  run_cmd->add_option("--sim-threshold", ro.sim_threshold, "similarity SInE seed threshold")
      ->check(CLI::Range(0.0, 1.0));
  auto* theta = run_cmd->add_option("--prefilter-theta", ro.prefilter_theta, "prefilter cosine threshold");
  run_cmd->add_flag("--no-prefilter", ro.no_prefilter, "keep every triple")->excludes(theta);
  run_cmd->add_flag("--prefilter-subjects", ro.prefilter_subjects,
                    "let the subject as well as the object pass the prefilter");
  run_cmd->add_option("--max-term-depth", ro.max_term_depth, "model builder term depth bound");
  run_cmd->add_option("--max-atoms", ro.max_atoms, "model builder atom budget");
  run_cmd->add_option("--max-rounds", ro.max_rounds, "model builder round bound");
  run_cmd->add_option("--temperature", ro.temperature, "softmax temperature");
  run_cmd->add_option("--oov", ro.oov, "out-of-vocabulary handling")
      ->check(CLI::IsMember({"split", "zero", "error"}));
  run_cmd->add_option("--fol-dir", ro.fol_dir, "read <id>_<role>.fol formulas instead of bag of words")
      ->check(CLI::ExistingDirectory);
  run_cmd->add_option("--stopwords", ro.stopwords, "stopword list for bag of words")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--report", ro.report, "write the JSONL report here instead of stdout");
  run_cmd->add_option("--export-tptp", ro.export_tptp, "write <id>_<role>.p files into this directory");
  run_cmd->add_option("--export-stage", ro.export_stage, "what --export-tptp writes")
      ->check(CLI::IsMember({"translated", "selected", "model"}));
  run_cmd->add_option("--explain", ro.explain, "print derivations for the chosen answer of a problem");
  run_cmd->add_option("--jobs,-j", ro.jobs, "worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--timings", ro.timings, "add per-problem seconds to the report");
  run_cmd->add_flag("--quiet,-q", ro.quiet, "no progress output on stderr");

  StatsOptions so;
  auto* stats_cmd = app.add_subcommand("kg-stats", "load a dump and report sizes and degrees");
  stats_cmd->add_option("--kg", so.kg, "dump or fixture file")->required()->check(CLI::ExistingFile);
  auto* srel = stats_cmd->add_option("--relations", so.relations, "relation whitelist file")
                   ->check(CLI::ExistingFile);
  stats_cmd->add_flag("--all-relations", so.all_relations, "no relation whitelist")->excludes(srel);
  stats_cmd->add_option("--concept", so.concepts, "report in/out degree of this concept");
  stats_cmd->add_option("--top", so.top, "list the N concepts with most outgoing edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kBadArguments;
  }

  try {
    if (*run_cmd) return run(ro);
    return kg_stats(so);
  } catch (const BadArgument& e) {
    std::cerr << "corg: " << e.what() << "\n";
    return kBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "corg: " << e.what() << "\n";
    return kStageError;
  }
}
