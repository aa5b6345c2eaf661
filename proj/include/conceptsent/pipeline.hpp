// End-to-end composition: ambiguity detection -> context profiling ->
// augmentation -> disambiguation -> sentence model, plus the staged CLI
// pipeline with on-disk artifacts.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conceptsent/classifier.hpp"
#include "conceptsent/knowledge.hpp"

namespace conceptsent {

struct PipelineParams {
  double threshold = default_ambiguity_threshold;
  double pmi_min = 1.0;
  std::size_t top_k = 20;
  std::size_t top_m = 5;
  std::size_t neighbor_limit = 50;
  double alpha = 1.0;
  ScoreMode score_mode = ScoreMode::unit;
  bool negation_flip = true;
  bool include_augmented = true;
};

// Everything learned from a training split.
struct PipelineModel {
  AmbiguityPartition partition;
  std::set<std::string> ambiguous;
  ProfileMap profiles;  // augmented
  DisambiguationModelMap models;
  SentenceModel sentence_model;
  FeatureConfig feature_config;
};

// Trains the full stack on the given (already annotated) sentences.
// Ambiguous concepts whose context profile is empty on both sides keep their
// static lexicon polarity (no disambiguation model is trained for them).
PipelineModel train_pipeline(std::span<const AnnotatedSentence> train,
                             const SentimentResource& resource, const EdgeStore& edges,
                             const EmbeddingStore& embeddings, FeatureMode mode,
                             const PipelineParams& params);

FeatureResources make_resources(const PipelineModel& model, const SentimentResource& resource);

Label predict_sentence(const PipelineModel& model, const SentimentResource& resource,
                       const AnnotatedSentence& sentence);

// CLI-facing configuration; JSON file keys match the field names.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path lexicon;
  std::filesystem::path edges;
  std::filesystem::path embeddings;
  std::filesystem::path output_dir = "out";
  PipelineParams params;
  std::vector<FeatureMode> eval_configs = {FeatureMode::bag_of_words,
                                           FeatureMode::bag_of_concepts,
                                           FeatureMode::boc_commonsense};
  std::size_t folds = 5;
  std::uint64_t seed = 7;

  void validate() const;  // throws SchemaError on out-of-range values
};

PipelineConfig load_config(const std::filesystem::path& path);

// Runs preprocess -> extract -> build-lexicon -> detect-ambiguous ->
// profile-context -> augment -> train -> evaluate, writing one artifact per
// stage into output_dir. Logs one line per stage; on failure logs the
// failing stage name and returns the matching exit code.
int run_pipeline(const PipelineConfig& config, std::ostream& log);

// Self-contained trained bundle for `train` / `predict` / `classify`.
void save_pipeline_model(const std::filesystem::path& path, const PipelineModel& model,
                         const SentimentResource& resource);
struct LoadedPipelineModel {
  PipelineModel model;
  SentimentResource resource;
};
LoadedPipelineModel load_pipeline_model(const std::filesystem::path& path);

// Identifies a resource file by shape: 4-column TSV with a whitelisted
// relation -> edges; 2/3-column TSV -> lexicon; otherwise embeddings.
enum class ResourceKind { lexicon, edges, embeddings };
ResourceKind sniff_resource_kind(const std::filesystem::path& path);

// One shared key namespace for the chunker: lexicon keys, edge endpoints,
// and embedding terms.
ConceptVocabulary build_vocabulary(const SentimentResource& resource, const EdgeStore& edges,
                                   const EmbeddingStore& embeddings);

// Bag-of-concepts artifact: {"sentence_id","label","score","has_negation",
// "concepts":[...]} per line. Loading restores only what the counting and
// profiling stages need (no tokens or spans).
void save_annotated(const std::filesystem::path& path,
                    std::span<const AnnotatedSentence> annotated);
std::vector<AnnotatedSentence> load_annotated(const std::filesystem::path& path);

}  // namespace conceptsent
