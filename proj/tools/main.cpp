// conceptsent: concept-level sentiment polarity pipeline CLI.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conceptsent/errors.hpp"
#include "conceptsent/evaluation.hpp"
#include "conceptsent/pipeline.hpp"

namespace {

using namespace conceptsent;

constexpr const char* version_string = "conceptsent 0.1.0";

struct ResourcePaths {
  std::filesystem::path lexicon;
  std::filesystem::path edges;
  std::filesystem::path embeddings;
};

// --resources accepts the three files in any order; each is identified by
// its shape.
ResourcePaths classify_resources(const std::vector<std::string>& paths) {
  ResourcePaths resolved;
  for (const auto& raw : paths) {
    std::filesystem::path path(raw);
    if (!std::filesystem::exists(path)) {
      throw IoError("missing resource file: " + path.string());
    }
    switch (sniff_resource_kind(path)) {
      case ResourceKind::lexicon: resolved.lexicon = path; break;
      case ResourceKind::edges: resolved.edges = path; break;
      case ResourceKind::embeddings: resolved.embeddings = path; break;
    }
  }
  if (resolved.lexicon.empty()) throw SchemaError("no lexicon TSV among --resources");
  if (resolved.edges.empty()) throw SchemaError("no edge TSV among --resources");
  if (resolved.embeddings.empty()) throw SchemaError("no embedding file among --resources");
  return resolved;
}

PipelineConfig merge_config(const std::optional<std::string>& config_path) {
  if (config_path) return load_config(*config_path);
  return PipelineConfig{};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << text;
}

int dispatch(CLI::App& app, int argc, char** argv) {
  try {
    app.parse(argc, argv);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::missing_resource;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::schema_violation;
  } catch (const InvariantError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::invariant_breach;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-based polarity disambiguation for sentiment concepts"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(0, 1);

  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "JSON pipeline configuration")
      ->configurable(false);

  // ---- preprocess ----------------------------------------------------
  auto* preprocess = app.add_subcommand("preprocess", "Normalize a raw corpus");
  struct {
    std::string corpus, out, abbrev, negation;
  } pre;
  preprocess->add_option("--corpus", pre.corpus, "raw corpus JSONL")->required();
  preprocess->add_option("--out", pre.out, "normalized sentence JSONL")->required();
  preprocess->add_option("--abbrev", pre.abbrev, "abbreviation table TSV override");
  preprocess->add_option("--negation-list", pre.negation, "negation marker list override");
  preprocess->callback([&] {
    PreprocessOptions options;
    AbbreviationTable abbreviations;
    std::unordered_set<std::string> markers;
    if (!pre.abbrev.empty()) {
      abbreviations = load_abbreviations(pre.abbrev);
      options.abbreviations = &abbreviations;
    }
    if (!pre.negation.empty()) {
      markers = load_negation_markers(pre.negation);
      options.negation_markers = &markers;
    }
    const auto sentences = load_corpus(pre.corpus, options);
    save_sentences(pre.out, sentences);
    std::cerr << "wrote " << sentences.size() << " sentences to " << pre.out << '\n';
  });

  // ---- extract -------------------------------------------------------
  auto* extract = app.add_subcommand("extract", "Extract bag-of-concepts per sentence");
  struct {
    std::string corpus, out;
    std::vector<std::string> vocab;
  } ext;
  extract->add_option("--corpus", ext.corpus, "corpus JSONL (raw or preprocessed)")->required();
  extract->add_option("--vocab", ext.vocab, "vocabulary sources (lexicon/edges/embeddings)")
      ->required()
      ->expected(-1);
  extract->add_option("--out", ext.out, "bag-of-concepts JSONL")->required();
  extract->callback([&] {
    ConceptVocabulary vocab;
    for (const auto& raw : ext.vocab) {
      std::filesystem::path path(raw);
      if (!std::filesystem::exists(path)) throw IoError("missing resource file: " + raw);
      switch (sniff_resource_kind(path)) {
        case ResourceKind::lexicon:
          for (const auto& [key, entry] : build_resource(path)) vocab.add(key);
          break;
        case ResourceKind::edges:
          for (const auto& edge : load_edges(path).edges()) {
            vocab.add(edge.start);
            vocab.add(edge.end);
          }
          break;
        case ResourceKind::embeddings:
          for (const auto& [key, vec] : load_embeddings(path).vectors()) vocab.add(key);
          break;
      }
    }
    const auto sentences = load_sentences(ext.corpus);
    const auto annotated = annotate_corpus(sentences, vocab);
    save_annotated(ext.out, annotated);
    std::cerr << "wrote " << annotated.size() << " bags to " << ext.out << '\n';
  });

  // ---- build-lexicon -------------------------------------------------
  auto* build_lexicon = app.add_subcommand("build-lexicon", "Expand the lexicon TSV");
  struct {
    std::string in, out;
  } lex;
  build_lexicon->add_option("--in", lex.in, "lexicon TSV")->required();
  build_lexicon->add_option("--out", lex.out, "expanded resource JSON")->required();
  build_lexicon->callback([&] {
    const auto resource = build_resource(lex.in);
    save_resource(lex.out, resource);
    std::cerr << "wrote " << resource.size() << " entries to " << lex.out << '\n';
  });

  // ---- detect-ambiguous ----------------------------------------------
  auto* detect = app.add_subcommand("detect-ambiguous", "Split concepts by polarity spread");
  struct {
    std::string concepts, corpus, out;
    double threshold = default_ambiguity_threshold;
    bool mean_scores = false;
  } det;
  detect->add_option("--concepts", det.concepts, "lexicon TSV or expanded resource JSON")
      ->required();
  detect->add_option("--corpus", det.corpus, "bag-of-concepts JSONL (from extract)")->required();
  detect->add_option("--threshold", det.threshold, "ambiguity threshold (default 0.85)");
  detect->add_flag("--mean-scores", det.mean_scores,
                   "use mean |sentence score| instead of unit scores");
  detect->add_option("--out", det.out, "partition JSON")->required();
  detect->callback([&] {
    if (det.threshold <= 0.0 || det.threshold > 1.0) {
      throw SchemaError("threshold " + std::to_string(det.threshold) + " outside (0,1]");
    }
    const std::filesystem::path concepts_path(det.concepts);
    const SentimentResource resource = concepts_path.extension() == ".json"
                                           ? load_resource(concepts_path)
                                           : build_resource(concepts_path);
    const auto annotated = load_annotated(det.corpus);
    const auto partition = detect_ambiguous_concepts(
        annotated, resource, det.threshold,
        det.mean_scores ? ScoreMode::mean_sentence_score : ScoreMode::unit);
    save_partition(det.out, partition, det.threshold);
    std::cerr << partition.ambiguous.size() << " ambiguous, " << partition.unambiguous.size()
              << " unambiguous -> " << det.out << '\n';
  });

  // ---- profile-context -----------------------------------------------
  auto* profile = app.add_subcommand("profile-context", "Collect contextual concept sets");
  struct {
    std::string ambiguous, corpus, out;
    double pmi_min = 1.0;
    std::size_t top_k = 20;
  } prof;
  profile->add_option("--ambiguous", prof.ambiguous, "partition JSON (from detect-ambiguous)")
      ->required();
  profile->add_option("--corpus", prof.corpus, "bag-of-concepts JSONL")->required();
  profile->add_option("--pmi-min", prof.pmi_min, "PMI retention floor (default 1.0)");
  profile->add_option("--top-k", prof.top_k, "max members per set (default 20)");
  profile->add_option("--out", prof.out, "profiles JSON")->required();
  profile->callback([&] {
    const auto partition = load_partition(prof.ambiguous);
    const auto annotated = load_annotated(prof.corpus);
    const CorpusStats stats(annotated);
    const RetentionRule rule{prof.pmi_min, prof.top_k};
    ProfileMap profiles;
    for (const auto& record : partition.ambiguous) {
      const RawContext raw = collect_context(record.concept_key, annotated);
      profiles[record.concept_key] = filter_context(record.concept_key, raw, stats, rule);
    }
    save_profiles(prof.out, profiles);
    std::cerr << "wrote " << profiles.size() << " profiles to " << prof.out << '\n';
  });

  // ---- augment ---------------------------------------------------------
  auto* augment = app.add_subcommand("augment", "Add knowledge-graph neighbors to profiles");
  struct {
    std::string profiles, edges, embeddings, out;
    std::size_t top_m = 5;
    std::size_t neighbor_limit = 50;
  } aug;
  augment->add_option("--profiles", aug.profiles, "profiles JSON")->required();
  augment->add_option("--edges", aug.edges, "edge TSV")->required();
  augment->add_option("--embeddings", aug.embeddings, "embedding text file")->required();
  augment->add_option("--top-m", aug.top_m, "augmented members per profile (default 5)");
  augment->add_option("--neighbor-limit", aug.neighbor_limit,
                      "graph neighbors considered (default 50)");
  augment->add_option("--out", aug.out, "augmented profiles JSON")->required();
  augment->callback([&] {
    const auto profiles = load_profiles(aug.profiles);
    const auto edges = load_edges(aug.edges);
    const auto embeddings = load_embeddings(aug.embeddings);
    const AugmentOptions options{aug.top_m, aug.neighbor_limit};
    ProfileMap augmented;
    for (const auto& [key, prof_entry] : profiles) {
      augmented[key] = augment_profile(prof_entry, edges, embeddings, options);
    }
    save_profiles(aug.out, augmented);
    std::cerr << "wrote " << augmented.size() << " augmented profiles to " << aug.out << '\n';
  });

  // ---- train -----------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train a sentence polarity model");
  struct {
    std::string mode = "boc_cs";
    std::string corpus, out;
    std::vector<std::string> resources;
    double threshold = default_ambiguity_threshold;
    double alpha = 1.0;
  } tr;
  train->add_option("--config", tr.mode, "feature mode: bow | boc | boc_cs")->required();
  train->add_option("--corpus", tr.corpus, "raw corpus JSONL")->required();
  train->add_option("--resources", tr.resources, "lexicon TSV, edge TSV, embedding file")
      ->required()
      ->expected(-1);
  train->add_option("--threshold", tr.threshold, "ambiguity threshold (default 0.85)");
  train->add_option("--alpha", tr.alpha, "Laplace smoothing (default 1.0)");
  train->add_option("--out", tr.out, "trained model bundle JSON")->required();
  train->callback([&] {
    const FeatureMode mode = parse_feature_mode(tr.mode);
    const ResourcePaths paths = classify_resources(tr.resources);
    const SentimentResource resource = build_resource(paths.lexicon);
    const EdgeStore edges = load_edges(paths.edges);
    const EmbeddingStore embeddings = load_embeddings(paths.embeddings);
    const auto sentences = load_sentences(tr.corpus);
    const auto annotated = annotate_corpus(sentences, build_vocabulary(resource, edges, embeddings));
    PipelineParams params;
    params.threshold = tr.threshold;
    params.alpha = tr.alpha;
    const PipelineModel model =
        train_pipeline(annotated, resource, edges, embeddings, mode, params);
    save_pipeline_model(tr.out, model, resource);
    std::cerr << "wrote model bundle to " << tr.out << '\n';
  });

  // ---- classify ----------------------------------------------------------
  auto* classify = app.add_subcommand("classify", "Resolve one ambiguous concept in a sentence");
  struct {
    std::string model, sentence, concept_arg;
  } cls;
  classify->add_option("--model", cls.model, "model bundle or disambiguation models JSON")
      ->required();
  classify->add_option("--sentence", cls.sentence, "sentence text")->required();
  classify->add_option("--concept", cls.concept_arg, "ambiguous concept key")->required();
  classify->callback([&] {
    DisambiguationModelMap models;
    try {
      models = load_models(cls.model);
    } catch (const SchemaError&) {
      models = load_pipeline_model(cls.model).model.models;
    }
    const std::string key = normalize_key(cls.concept_arg);
    const auto it = models.find(key);
    if (it == models.end()) {
      throw SchemaError("no disambiguation model for concept \"" + key + "\"");
    }
    // Chunk against the model vocabulary so multi-word clues are found.
    ConceptVocabulary vocab;
    vocab.add(key);
    for (const auto& [clue, p] : it->second.cond_pos) vocab.add(clue);
    const Sentence sentence = make_sentence("cli", cls.sentence, Label::neutral, 0.0);
    std::set<std::string> clues;
    for (const auto& item : extract_concepts(sentence, vocab)) {
      if (item.key != key) clues.insert(item.key);
    }
    const Disambiguation result = classify_concept(it->second, clues);
    std::cout << key << '\t' << to_string(result.polarity) << '\t' << result.log_margin
              << '\n';
  });

  // ---- predict -----------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "Label sentences with a trained model");
  struct {
    std::string model, in, out;
  } prd;
  predict_cmd->add_option("--model", prd.model, "model bundle JSON (from train)")->required();
  predict_cmd->add_option("--in", prd.in, "corpus JSONL to label")->required();
  predict_cmd->add_option("--out", prd.out, "predictions JSONL")->required();
  predict_cmd->callback([&] {
    const LoadedPipelineModel loaded = load_pipeline_model(prd.model);
    EdgeStore no_edges;
    EmbeddingStore no_embeddings;
    const ConceptVocabulary vocab =
        build_vocabulary(loaded.resource, no_edges, no_embeddings);
    const auto sentences = load_sentences(prd.in);
    const auto annotated = annotate_corpus(sentences, vocab);
    std::string out_text;
    for (const auto& entry : annotated) {
      const Label predicted = predict_sentence(loaded.model, loaded.resource, entry);
      nlohmann::json record;
      record["id"] = entry.sentence.id;
      record["predicted"] = to_string(predicted);
      out_text += record.dump() + "\n";
    }
    write_file(prd.out, out_text);
    std::cerr << "wrote predictions to " << prd.out << '\n';
  });

  // ---- evaluate ------------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated comparison of feature modes");
  struct {
    std::string corpus, out;
    std::vector<std::string> resources;
    std::string configs = "bow,boc,boc_cs";
    std::size_t folds = 5;
    std::uint64_t seed = 7;
    double threshold = default_ambiguity_threshold;
  } ev;
  evaluate->add_option("--corpus", ev.corpus, "raw corpus JSONL")->required();
  evaluate->add_option("--resources", ev.resources, "lexicon TSV, edge TSV, embedding file")
      ->required()
      ->expected(-1);
  evaluate->add_option("--configs", ev.configs, "comma-separated modes (default bow,boc,boc_cs)");
  evaluate->add_option("--folds", ev.folds, "fold count (default 5)");
  evaluate->add_option("--seed", ev.seed, "shuffle seed (default 7)");
  evaluate->add_option("--threshold", ev.threshold, "ambiguity threshold (default 0.85)");
  evaluate->add_option("--out", ev.out, "report JSON (a .txt table is written alongside)")
      ->required();
  evaluate->callback([&] {
    const ResourcePaths paths = classify_resources(ev.resources);
    const SentimentResource resource = build_resource(paths.lexicon);
    const EdgeStore edges = load_edges(paths.edges);
    const EmbeddingStore embeddings = load_embeddings(paths.embeddings);
    const auto sentences = load_sentences(ev.corpus);
    const auto annotated = annotate_corpus(sentences, build_vocabulary(resource, edges, embeddings));

    std::vector<FeatureMode> modes;
    std::size_t pos = 0;
    while (pos <= ev.configs.size()) {
      const std::size_t comma = ev.configs.find(',', pos);
      const std::string name = ev.configs.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!name.empty()) modes.push_back(parse_feature_mode(name));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    PipelineParams params;
    params.threshold = ev.threshold;
    const EvalReport report = cross_validate(annotated, modes, resource, edges, embeddings,
                                             params, ev.folds, ev.seed);
    write_file(ev.out, report_to_json(report) + "\n");
    std::filesystem::path table_path(ev.out);
    table_path.replace_extension(".txt");
    write_file(table_path, render_report_table(report));
    std::cout << render_report_table(report);
  });

  // ---- run-all --------------------------------------------------------------
  auto* run_all = app.add_subcommand("run-all", "Run every stage from a config file");
  run_all->callback([&] {
    if (!config_path) throw SchemaError("run-all requires --config <path>");
    const PipelineConfig config = merge_config(config_path);
    const int code = run_pipeline(config, std::cerr);
    if (code != exit_code::ok) std::exit(code);
  });

  if (argc <= 1) {
    std::cout << app.help();
    return exit_code::ok;
  }
  return dispatch(app, argc, argv);
}
