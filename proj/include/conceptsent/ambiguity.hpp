// Ambiguous-concept detection: per-concept polarity distribution statistics
// over the labeled corpus, split at a standard-deviation threshold.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "conceptsent/concepts.hpp"
#include "conceptsent/lexicon.hpp"

namespace conceptsent {

inline constexpr double default_ambiguity_threshold = 0.85;

struct OccurrenceCounts {
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  bool operator==(const OccurrenceCounts&) const = default;
};

// mu/delta are the mean and population standard deviation of the observation
// multiset holding pos_count copies of +pos_score and neg_count copies of
// -neg_score.
struct AmbiguityRecord {
  std::string concept_key;
  std::int64_t pos_count = 0;
  std::int64_t neg_count = 0;
  double pos_score = 1.0;
  double neg_score = 1.0;
  double mu = 0.0;
  double delta = 0.0;
  bool ambiguous = false;
};

// Sentence-level presence counts of each resource concept, split by sentence
// label. Neutral sentences are ignored; a concept occurring twice in one
// sentence counts once.
std::map<std::string, OccurrenceCounts> count_occurrences(
    std::span<const AnnotatedSentence> sentences, const SentimentResource& resource);

// Throws InvariantError when both counts are zero or a score is not > 0.
AmbiguityRecord compute_statistics(const std::string& concept_key, OccurrenceCounts counts,
                                   double pos_score, double neg_score,
                                   double threshold = default_ambiguity_threshold);

struct AmbiguityPartition {
  std::vector<AmbiguityRecord> ambiguous;
  std::vector<AmbiguityRecord> unambiguous;
};

// Partition by delta strictly greater than the threshold.
AmbiguityPartition detect_ambiguous(std::vector<AmbiguityRecord> records, double threshold);

enum class ScoreMode {
  unit,                // PosScore = NegScore = 1
  mean_sentence_score  // mean |score| of the concept's pos/neg sentences
};

// Full detection pass: count, compute statistics per concept, partition.
AmbiguityPartition detect_ambiguous_concepts(std::span<const AnnotatedSentence> sentences,
                                             const SentimentResource& resource,
                                             double threshold = default_ambiguity_threshold,
                                             ScoreMode score_mode = ScoreMode::unit);

void save_partition(const std::filesystem::path& path, const AmbiguityPartition& partition,
                    double threshold);
AmbiguityPartition load_partition(const std::filesystem::path& path);

}  // namespace conceptsent
