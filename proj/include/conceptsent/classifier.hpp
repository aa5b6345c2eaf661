// Sentence-level two-class polarity classification over three feature
// schemes: bag-of-words, bag-of-concepts, and bag-of-concepts enriched with
// disambiguated lexicon tags and commonsense augmentations.
#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "conceptsent/disambiguator.hpp"

namespace conceptsent {

enum class FeatureMode { bag_of_words, bag_of_concepts, boc_commonsense };

std::string to_string(FeatureMode mode);
FeatureMode parse_feature_mode(std::string_view name);  // bow | boc | boc_cs

struct FeatureConfig {
  FeatureMode mode = FeatureMode::bag_of_words;
  bool use_disambiguation = false;  // true only in boc_commonsense
  bool negation_flip = true;        // appends a NEG marker feature
  bool include_augmented = true;    // boc_commonsense: append augmented members

  static FeatureConfig for_mode(FeatureMode mode);
};

// Everything the commonsense feature scheme consults. bag_of_words and plain
// bag_of_concepts ignore all of it.
struct FeatureResources {
  const SentimentResource* lexicon = nullptr;
  const std::set<std::string>* ambiguous = nullptr;
  const DisambiguationModelMap* models = nullptr;
  const ProfileMap* profiles = nullptr;
};

// Multiset of feature keys for one sentence under the configured scheme.
std::vector<std::string> featurize(const AnnotatedSentence& sentence,
                                   const FeatureConfig& config,
                                   const FeatureResources& resources);

// Multinomial Naive Bayes with Laplace smoothing over the feature space.
struct SentenceModel {
  FeatureMode mode = FeatureMode::bag_of_words;
  double alpha = 1.0;
  std::int64_t doc_count_pos = 0;
  std::int64_t doc_count_neg = 0;
  std::map<std::string, std::int64_t> feature_count_pos;
  std::map<std::string, std::int64_t> feature_count_neg;
  std::int64_t total_pos = 0;
  std::int64_t total_neg = 0;
  std::set<std::string> vocabulary;
};

// Throws InvariantError when the training set is empty or single-class.
// Neutral sentences are skipped.
SentenceModel train_sentence_model(std::span<const AnnotatedSentence> train,
                                   const FeatureConfig& config,
                                   const FeatureResources& resources, double alpha = 1.0);

// Log-posterior argmax; unseen features are dropped; an exact tie resolves
// to positive.
Label predict(const SentenceModel& model, const AnnotatedSentence& sentence,
              const FeatureConfig& config, const FeatureResources& resources);

}  // namespace conceptsent
