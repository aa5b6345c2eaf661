// Evaluation: confusion-matrix metrics and stratified k-fold cross-validation
// of the full pipeline under each feature configuration.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "conceptsent/pipeline.hpp"

namespace conceptsent {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

// Fractions in [0,1]. A metric with an empty denominator is reported as 0
// with its defined-flag cleared. Throws InvariantError on all-zero counts.
struct MetricValues {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  bool precision_defined = true;
  bool recall_defined = true;
  bool f1_defined = true;
};

MetricValues metrics(const ConfusionCounts& counts);

struct FoldResult {
  int fold = 0;
  ConfusionCounts counts;
  MetricValues values;
};

struct ConfigReport {
  FeatureMode mode = FeatureMode::bag_of_words;
  std::vector<FoldResult> folds;
  MetricValues mean;  // mean over folds
};

struct EvalReport {
  std::string header;
  std::uint64_t seed = 0;
  std::size_t fold_count = 0;
  std::vector<ConfigReport> configs;
};

// Deterministic seeded shuffle (Fisher-Yates over mt19937_64); identical
// output on every platform.
void seeded_shuffle(std::vector<std::size_t>& indices, std::uint64_t seed);

// Stratified-by-label fold assignment over the non-neutral sentences.
// Returns fold index per sentence position (neutral entries get -1).
std::vector<int> assign_folds(std::span<const AnnotatedSentence> sentences, std::size_t k,
                              std::uint64_t seed);

// Trains the full pipeline on k-1 folds and scores the held-out fold, for
// every fold and every requested configuration.
EvalReport cross_validate(std::span<const AnnotatedSentence> sentences,
                          std::span<const FeatureMode> modes,
                          const SentimentResource& resource, const EdgeStore& edges,
                          const EmbeddingStore& embeddings, const PipelineParams& params,
                          std::size_t k, std::uint64_t seed);

std::string report_to_json(const EvalReport& report);
// Aligned text table: one row per configuration, percentage columns for
// precision / recall / F-measure / accuracy.
std::string render_report_table(const EvalReport& report);

}  // namespace conceptsent
