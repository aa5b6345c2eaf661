#include "conceptsent/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "conceptsent/errors.hpp"
#include "conceptsent/evaluation.hpp"

namespace conceptsent {

namespace {
using nlohmann::json;
}  // namespace

ConceptVocabulary build_vocabulary(const SentimentResource& resource, const EdgeStore& edges,
                                   const EmbeddingStore& embeddings) {
  ConceptVocabulary vocab;
  for (const auto& [key, entry] : resource) vocab.add(key);
  for (const auto& edge : edges.edges()) {
    vocab.add(edge.start);
    vocab.add(edge.end);
  }
  for (const auto& [key, vector] : embeddings.vectors()) vocab.add(key);
  return vocab;
}

namespace {

json annotated_to_json(const AnnotatedSentence& annotated) {
  json record;
  record["sentence_id"] = annotated.sentence.id;
  record["label"] = to_string(annotated.sentence.label);
  record["score"] = annotated.sentence.score;
  record["has_negation"] = annotated.sentence.has_negation;
  json keys = json::array();
  for (const auto& item : annotated.concepts) keys.push_back(item.key);
  record["concepts"] = std::move(keys);
  return record;
}

}  // namespace

PipelineModel train_pipeline(std::span<const AnnotatedSentence> train,
                             const SentimentResource& resource, const EdgeStore& edges,
                             const EmbeddingStore& embeddings, FeatureMode mode,
                             const PipelineParams& params) {
  PipelineModel model;
  model.feature_config = FeatureConfig::for_mode(mode);
  model.feature_config.negation_flip = params.negation_flip;
  model.feature_config.include_augmented = params.include_augmented;

  if (mode == FeatureMode::boc_commonsense) {
    model.partition =
        detect_ambiguous_concepts(train, resource, params.threshold, params.score_mode);
    const CorpusStats stats(train);
    const RetentionRule retention{params.pmi_min, params.top_k};
    const AugmentOptions augment{params.top_m, params.neighbor_limit};
    for (const auto& record : model.partition.ambiguous) {
      model.ambiguous.insert(record.concept_key);
      const RawContext raw = collect_context(record.concept_key, train);
      ContextProfile profile = filter_context(record.concept_key, raw, stats, retention);
      profile = augment_profile(std::move(profile), edges, embeddings, augment);
      if (!profile.positive_set.empty() || !profile.negative_set.empty()) {
        const double lexicon_polarity = resource.at(record.concept_key).polarity_value;
        model.models[record.concept_key] =
            train_disambiguator(profile, record, params.alpha, lexicon_polarity);
      }
      model.profiles[record.concept_key] = std::move(profile);
    }
  }

  model.sentence_model = train_sentence_model(train, model.feature_config,
                                              make_resources(model, resource), params.alpha);
  return model;
}

FeatureResources make_resources(const PipelineModel& model, const SentimentResource& resource) {
  FeatureResources resources;
  resources.lexicon = &resource;
  resources.ambiguous = &model.ambiguous;
  resources.models = &model.models;
  resources.profiles = &model.profiles;
  return resources;
}

Label predict_sentence(const PipelineModel& model, const SentimentResource& resource,
                       const AnnotatedSentence& sentence) {
  return predict(model.sentence_model, sentence, model.feature_config,
                 make_resources(model, resource));
}

void PipelineConfig::validate() const {
  const auto fail = [](const std::string& message) { throw SchemaError("config: " + message); };
  if (params.threshold <= 0.0 || params.threshold > 1.0) {
    fail("threshold " + std::to_string(params.threshold) + " outside (0,1]");
  }
  if (params.pmi_min < 0.0) fail("pmi_min must be >= 0");
  if (params.top_k < 1) fail("top_k must be >= 1");
  if (params.neighbor_limit < 1) fail("neighbor_limit must be >= 1");
  if (params.alpha <= 0.0) fail("alpha must be > 0");
  if (folds < 2) fail("folds must be >= 2");
  if (eval_configs.empty()) fail("eval_configs must not be empty");
  if (corpus.empty()) fail("corpus path is required");
  if (lexicon.empty()) fail("lexicon path is required");
  if (edges.empty()) fail("edges path is required");
  if (embeddings.empty()) fail("embeddings path is required");
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw SchemaError("config file is not a JSON object: " + path.string());
  }

  PipelineConfig config;
  const auto base = path.parent_path();
  const auto resolve = [&](const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
  };
  if (doc.contains("corpus")) config.corpus = resolve(doc["corpus"].get<std::string>());
  if (doc.contains("lexicon")) config.lexicon = resolve(doc["lexicon"].get<std::string>());
  if (doc.contains("edges")) config.edges = resolve(doc["edges"].get<std::string>());
  if (doc.contains("embeddings")) config.embeddings = resolve(doc["embeddings"].get<std::string>());
  if (doc.contains("output_dir")) config.output_dir = resolve(doc["output_dir"].get<std::string>());
  if (doc.contains("threshold")) config.params.threshold = doc["threshold"].get<double>();
  if (doc.contains("pmi_min")) config.params.pmi_min = doc["pmi_min"].get<double>();
  if (doc.contains("top_k")) config.params.top_k = doc["top_k"].get<std::size_t>();
  if (doc.contains("top_m")) config.params.top_m = doc["top_m"].get<std::size_t>();
  if (doc.contains("neighbor_limit")) {
    config.params.neighbor_limit = doc["neighbor_limit"].get<std::size_t>();
  }
  if (doc.contains("alpha")) config.params.alpha = doc["alpha"].get<double>();
  if (doc.contains("negation_flip")) config.params.negation_flip = doc["negation_flip"].get<bool>();
  if (doc.contains("include_augmented")) {
    config.params.include_augmented = doc["include_augmented"].get<bool>();
  }
  if (doc.contains("score_mode")) {
    const auto mode = doc["score_mode"].get<std::string>();
    if (mode == "unit") {
      config.params.score_mode = ScoreMode::unit;
    } else if (mode == "mean_sentence_score") {
      config.params.score_mode = ScoreMode::mean_sentence_score;
    } else {
      throw SchemaError("config: unknown score_mode \"" + mode + "\"");
    }
  }
  if (doc.contains("folds")) config.folds = doc["folds"].get<std::size_t>();
  if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("eval_configs")) {
    config.eval_configs.clear();
    for (const auto& name : doc["eval_configs"]) {
      config.eval_configs.push_back(parse_feature_mode(name.get<std::string>()));
    }
  }
  return config;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << text;
}

json sentence_model_to_json(const SentenceModel& model) {
  json value;
  value["mode"] = to_string(model.mode);
  value["alpha"] = model.alpha;
  value["doc_count_pos"] = model.doc_count_pos;
  value["doc_count_neg"] = model.doc_count_neg;
  value["feature_count_pos"] = model.feature_count_pos;
  value["feature_count_neg"] = model.feature_count_neg;
  value["total_pos"] = model.total_pos;
  value["total_neg"] = model.total_neg;
  value["vocabulary"] = model.vocabulary;
  return value;
}

SentenceModel sentence_model_from_json(const json& value) {
  SentenceModel model;
  model.mode = parse_feature_mode(value.at("mode").get<std::string>());
  model.alpha = value.at("alpha").get<double>();
  model.doc_count_pos = value.at("doc_count_pos").get<std::int64_t>();
  model.doc_count_neg = value.at("doc_count_neg").get<std::int64_t>();
  model.feature_count_pos =
      value.at("feature_count_pos").get<std::map<std::string, std::int64_t>>();
  model.feature_count_neg =
      value.at("feature_count_neg").get<std::map<std::string, std::int64_t>>();
  model.total_pos = value.at("total_pos").get<std::int64_t>();
  model.total_neg = value.at("total_neg").get<std::int64_t>();
  for (const auto& key : value.at("vocabulary")) {
    model.vocabulary.insert(key.get<std::string>());
  }
  return model;
}

}  // namespace

void save_pipeline_model(const std::filesystem::path& path, const PipelineModel& model,
                         const SentimentResource& resource) {
  json doc;
  doc["mode"] = to_string(model.feature_config.mode);
  doc["negation_flip"] = model.feature_config.negation_flip;
  doc["include_augmented"] = model.feature_config.include_augmented;

  json lexicon = json::object();
  for (const auto& [key, entry] : resource) lexicon[key] = entry.polarity_value;
  doc["lexicon"] = std::move(lexicon);

  json ambiguous = json::array();
  for (const auto& key : model.ambiguous) ambiguous.push_back(key);
  doc["ambiguous"] = std::move(ambiguous);

  json records = json::array();
  for (const auto& record : model.partition.ambiguous) {
    records.push_back({{"concept", record.concept_key},
                       {"pos_count", record.pos_count},
                       {"neg_count", record.neg_count},
                       {"mu", record.mu},
                       {"delta", record.delta}});
  }
  doc["ambiguous_records"] = std::move(records);

  json profiles = json::object();
  for (const auto& [key, profile] : model.profiles) {
    json sets;
    for (const auto* side : {&profile.positive_set, &profile.negative_set}) {
      json members = json::object();
      for (const auto& [member, stats] : *side) {
        members[member] = {{"count", stats.count},
                           {"pmi", stats.pmi},
                           {"pseudo_count", stats.pseudo_count}};
      }
      sets[side == &profile.positive_set ? "positive_set" : "negative_set"] =
          std::move(members);
    }
    profiles[key] = std::move(sets);
  }
  doc["profiles"] = std::move(profiles);

  json models = json::object();
  for (const auto& [key, disamb] : model.models) {
    models[key] = {{"concept", disamb.concept_key},
                   {"prior_pos", disamb.prior_pos},
                   {"prior_neg", disamb.prior_neg},
                   {"cond_pos", disamb.cond_pos},
                   {"cond_neg", disamb.cond_neg},
                   {"vocab_size", disamb.vocab_size},
                   {"alpha", disamb.alpha},
                   {"lexicon_polarity", disamb.lexicon_polarity}};
  }
  doc["disambiguation_models"] = std::move(models);
  doc["sentence_model"] = sentence_model_to_json(model.sentence_model);
  write_text(path, doc.dump(2) + "\n");
}

LoadedPipelineModel load_pipeline_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw SchemaError("model file is not a JSON object: " + path.string());
  }

  LoadedPipelineModel loaded;
  loaded.model.feature_config =
      FeatureConfig::for_mode(parse_feature_mode(doc.at("mode").get<std::string>()));
  loaded.model.feature_config.negation_flip = doc.value("negation_flip", true);
  loaded.model.feature_config.include_augmented = doc.value("include_augmented", true);

  for (const auto& [key, value] : doc.at("lexicon").items()) {
    loaded.resource.emplace(key, SentimentEntry{key, value.get<double>(), {}});
  }
  for (const auto& key : doc.at("ambiguous")) {
    loaded.model.ambiguous.insert(key.get<std::string>());
  }
  for (const auto& value : doc.at("ambiguous_records")) {
    AmbiguityRecord record;
    record.concept_key = value.at("concept").get<std::string>();
    record.pos_count = value.at("pos_count").get<std::int64_t>();
    record.neg_count = value.at("neg_count").get<std::int64_t>();
    record.mu = value.at("mu").get<double>();
    record.delta = value.at("delta").get<double>();
    record.ambiguous = true;
    loaded.model.partition.ambiguous.push_back(std::move(record));
  }
  for (const auto& [key, sets] : doc.at("profiles").items()) {
    ContextProfile profile;
    profile.ambiguous_concept = key;
    for (const char* side_name : {"positive_set", "negative_set"}) {
      auto& side = std::string(side_name) == "positive_set" ? profile.positive_set
                                                            : profile.negative_set;
      for (const auto& [member, stats] : sets.at(side_name).items()) {
        side[member] = ContextMember{stats.at("count").get<std::int64_t>(),
                                     stats.at("pmi").get<double>(),
                                     stats.at("pseudo_count").get<double>()};
      }
    }
    profile.m_pos = static_cast<std::int64_t>(profile.positive_set.size());
    profile.m_neg = static_cast<std::int64_t>(profile.negative_set.size());
    loaded.model.profiles[key] = std::move(profile);
  }
  for (const auto& [key, value] : doc.at("disambiguation_models").items()) {
    DisambiguationModel disamb;
    disamb.concept_key = value.at("concept").get<std::string>();
    disamb.prior_pos = value.at("prior_pos").get<double>();
    disamb.prior_neg = value.at("prior_neg").get<double>();
    disamb.cond_pos = value.at("cond_pos").get<std::map<std::string, double>>();
    disamb.cond_neg = value.at("cond_neg").get<std::map<std::string, double>>();
    disamb.vocab_size = value.at("vocab_size").get<std::size_t>();
    disamb.alpha = value.at("alpha").get<double>();
    disamb.lexicon_polarity = value.at("lexicon_polarity").get<double>();
    loaded.model.models[key] = std::move(disamb);
  }
  loaded.model.sentence_model = sentence_model_from_json(doc.at("sentence_model"));
  return loaded;
}

void save_annotated(const std::filesystem::path& path,
                    std::span<const AnnotatedSentence> annotated) {
  std::ostringstream out;
  for (const auto& entry : annotated) out << annotated_to_json(entry).dump() << '\n';
  write_text(path, out.str());
}

std::vector<AnnotatedSentence> load_annotated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open concepts file: " + path.string());
  std::vector<AnnotatedSentence> annotated;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("concepts")) {
      throw SchemaError("concepts line " + std::to_string(line_number) +
                        ": expected a bag-of-concepts record");
    }
    AnnotatedSentence entry;
    entry.sentence.id = record.at("sentence_id").get<std::string>();
    entry.sentence.label = parse_label(record.at("label").get<std::string>());
    entry.sentence.score = record.value("score", 0.0);
    entry.sentence.has_negation = record.value("has_negation", false);
    for (const auto& key : record.at("concepts")) {
      entry.concepts.push_back(Concept{key.get<std::string>(), std::nullopt});
    }
    annotated.push_back(std::move(entry));
  }
  return annotated;
}

ResourceKind sniff_resource_kind(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open resource file: " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() == 4 && parse_relation(fields[0]).has_value()) {
      return ResourceKind::edges;
    }
    if (fields.size() == 2 || fields.size() == 3) return ResourceKind::lexicon;
    return ResourceKind::embeddings;
  }
  throw SchemaError("resource file has no content lines: " + path.string());
}

int run_pipeline(const PipelineConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const SchemaError& e) {
    log << "config validation failed: " << e.what() << '\n';
    return exit_code::schema_violation;
  }
  for (const auto& path : {config.corpus, config.lexicon, config.edges, config.embeddings}) {
    if (!std::filesystem::exists(path)) {
      log << "missing resource file: " << path.string() << '\n';
      return exit_code::missing_resource;
    }
  }

  std::string stage = "setup";
  try {
    std::filesystem::create_directories(config.output_dir);
    const auto artifact = [&](const char* name) { return config.output_dir / name; };

    stage = "preprocess";
    log << "[preprocess] " << config.corpus.string() << '\n';
    const std::vector<Sentence> sentences = load_corpus(config.corpus);
    save_sentences(artifact("sentences.jsonl"), sentences);

    stage = "build-lexicon";
    log << "[build-lexicon] " << config.lexicon.string() << '\n';
    const SentimentResource resource = build_resource(config.lexicon);
    save_resource(artifact("lexicon.json"), resource);

    stage = "extract";
    log << "[extract] vocabulary from lexicon + edges + embeddings\n";
    const EdgeStore edges = load_edges(config.edges);
    const EmbeddingStore embeddings = load_embeddings(config.embeddings);
    const ConceptVocabulary vocab = build_vocabulary(resource, edges, embeddings);
    const std::vector<AnnotatedSentence> annotated = annotate_corpus(sentences, vocab);
    save_annotated(artifact("concepts.jsonl"), annotated);

    stage = "detect-ambiguous";
    const AmbiguityPartition partition = detect_ambiguous_concepts(
        annotated, resource, config.params.threshold, config.params.score_mode);
    log << "[detect-ambiguous] " << partition.ambiguous.size() << " ambiguous / "
        << partition.unambiguous.size() << " unambiguous\n";
    save_partition(artifact("ambiguity.json"), partition, config.params.threshold);

    stage = "profile-context";
    const CorpusStats stats(annotated);
    const RetentionRule retention{config.params.pmi_min, config.params.top_k};
    ProfileMap profiles;
    for (const auto& record : partition.ambiguous) {
      const RawContext raw = collect_context(record.concept_key, annotated);
      profiles[record.concept_key] = filter_context(record.concept_key, raw, stats, retention);
    }
    log << "[profile-context] " << profiles.size() << " profiles\n";
    save_profiles(artifact("profiles.json"), profiles);

    stage = "augment";
    const AugmentOptions augment{config.params.top_m, config.params.neighbor_limit};
    ProfileMap augmented;
    for (const auto& [key, profile] : profiles) {
      augmented[key] = augment_profile(profile, edges, embeddings, augment);
    }
    log << "[augment] top_m=" << config.params.top_m << '\n';
    save_profiles(artifact("profiles_augmented.json"), augmented);

    stage = "train";
    const PipelineModel model = train_pipeline(annotated, resource, edges, embeddings,
                                               FeatureMode::boc_commonsense, config.params);
    save_models(artifact("disambiguation_models.json"), model.models);
    save_pipeline_model(artifact("pipeline_model.json"), model, resource);
    log << "[train] " << model.models.size() << " disambiguation models\n";

    stage = "evaluate";
    const EvalReport report =
        cross_validate(annotated, config.eval_configs, resource, edges, embeddings,
                       config.params, config.folds, config.seed);
    write_text(artifact("report.json"), report_to_json(report) + "\n");
    write_text(artifact("report.txt"), render_report_table(report));
    log << "[evaluate] report written to " << artifact("report.json").string() << '\n';
    return exit_code::ok;
  } catch (const IoError& e) {
    log << "stage " << stage << " failed: " << e.what() << '\n';
    return exit_code::missing_resource;
  } catch (const SchemaError& e) {
    log << "stage " << stage << " failed: " << e.what() << '\n';
    return exit_code::schema_violation;
  } catch (const InvariantError& e) {
    log << "stage " << stage << " failed: " << e.what() << '\n';
    return exit_code::invariant_breach;
  }
}

}  // namespace conceptsent
