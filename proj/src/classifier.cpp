#include "conceptsent/classifier.hpp"

#include <cmath>

#include "conceptsent/errors.hpp"

namespace conceptsent {

std::string to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::bag_of_words: return "bag_of_words";
    case FeatureMode::bag_of_concepts: return "bag_of_concepts";
    case FeatureMode::boc_commonsense: return "boc_commonsense";
  }
  throw InvariantError("unreachable feature mode");
}

FeatureMode parse_feature_mode(std::string_view name) {
  if (name == "bow" || name == "bag_of_words") return FeatureMode::bag_of_words;
  if (name == "boc" || name == "bag_of_concepts") return FeatureMode::bag_of_concepts;
  if (name == "boc_cs" || name == "boc_commonsense") return FeatureMode::boc_commonsense;
  throw SchemaError("unknown feature mode \"" + std::string(name) +
                    "\" (expected bow, boc, or boc_cs)");
}

FeatureConfig FeatureConfig::for_mode(FeatureMode mode) {
  FeatureConfig config;
  config.mode = mode;
  config.use_disambiguation = mode == FeatureMode::boc_commonsense;
  return config;
}

namespace {

std::string polarity_tag(const std::string& key, Polarity polarity) {
  return key + (polarity == Polarity::positive ? "#pos" : "#neg");
}

std::vector<std::string> commonsense_features(const AnnotatedSentence& annotated,
                                              const FeatureConfig& config,
                                              const FeatureResources& resources) {
  std::set<std::string> bag_keys;
  for (const auto& item : annotated.concepts) bag_keys.insert(item.key);

  const auto is_ambiguous = [&](const std::string& key) {
    return resources.ambiguous != nullptr && resources.ambiguous->contains(key);
  };

  std::vector<std::string> features;
  features.reserve(annotated.concepts.size() + 4);
  for (const auto& item : annotated.concepts) {
    const std::string& key = item.key;
    if (config.use_disambiguation && is_ambiguous(key)) {
      const DisambiguationModel* model = nullptr;
      if (resources.models != nullptr) {
        if (const auto it = resources.models->find(key); it != resources.models->end()) {
          model = &it->second;
        }
      }
      if (model != nullptr) {
        std::set<std::string> clues = bag_keys;
        clues.erase(key);
        features.push_back(polarity_tag(key, classify_concept(*model, clues).polarity));
        continue;
      }
      // No trained model (context never observed): fall through to the
      // static lexicon sign.
    }
    if (resources.lexicon != nullptr) {
      if (const auto it = resources.lexicon->find(key); it != resources.lexicon->end()) {
        features.push_back(polarity_tag(
            key, it->second.polarity_value > 0.0 ? Polarity::positive : Polarity::negative));
        continue;
      }
    }
    features.push_back(key);
  }

  if (config.include_augmented && resources.profiles != nullptr) {
    std::set<std::string> handled;
    for (const auto& item : annotated.concepts) {
      if (!is_ambiguous(item.key) || !handled.insert(item.key).second) continue;
      const auto it = resources.profiles->find(item.key);
      if (it == resources.profiles->end()) continue;
      for (const auto* side : {&it->second.positive_set, &it->second.negative_set}) {
        for (const auto& [member, stats] : *side) {
          if (stats.pseudo_count > 0.0) features.push_back(member);
        }
      }
    }
  }
  return features;
}

}  // namespace

std::vector<std::string> featurize(const AnnotatedSentence& annotated,
                                   const FeatureConfig& config,
                                   const FeatureResources& resources) {
  std::vector<std::string> features;
  switch (config.mode) {
    case FeatureMode::bag_of_words:
      for (std::size_t t = 0; t < annotated.sentence.lemmas.size(); ++t) {
        const auto& lemma = annotated.sentence.lemmas[t];
        if (is_stopword(lemma) || is_stopword(annotated.sentence.tokens[t])) continue;
        features.push_back(lemma);
      }
      break;
    case FeatureMode::bag_of_concepts:
      for (const auto& item : annotated.concepts) features.push_back(item.key);
      break;
    case FeatureMode::boc_commonsense:
      features = commonsense_features(annotated, config, resources);
      break;
  }
  if (config.negation_flip && annotated.sentence.has_negation) {
    features.push_back("NEG");
  }
  return features;
}

SentenceModel train_sentence_model(std::span<const AnnotatedSentence> train,
                                   const FeatureConfig& config,
                                   const FeatureResources& resources, double alpha) {
  if (alpha <= 0.0) throw InvariantError("train_sentence_model: alpha must be > 0");
  SentenceModel model;
  model.mode = config.mode;
  model.alpha = alpha;
  for (const auto& annotated : train) {
    const Label label = annotated.sentence.label;
    if (label == Label::neutral) continue;
    const bool positive = label == Label::positive;
    (positive ? model.doc_count_pos : model.doc_count_neg) += 1;
    for (auto& feature : featurize(annotated, config, resources)) {
      auto& counts = positive ? model.feature_count_pos : model.feature_count_neg;
      ++counts[feature];
      (positive ? model.total_pos : model.total_neg) += 1;
      model.vocabulary.insert(std::move(feature));
    }
  }
  if (model.doc_count_pos == 0 || model.doc_count_neg == 0) {
    throw InvariantError("train_sentence_model: training set must contain both classes");
  }
  return model;
}

Label predict(const SentenceModel& model, const AnnotatedSentence& sentence,
              const FeatureConfig& config, const FeatureResources& resources) {
  const double total_docs = static_cast<double>(model.doc_count_pos + model.doc_count_neg);
  double log_pos = std::log(static_cast<double>(model.doc_count_pos) / total_docs);
  double log_neg = std::log(static_cast<double>(model.doc_count_neg) / total_docs);

  const double vocab = static_cast<double>(model.vocabulary.size());
  const double denom_pos = static_cast<double>(model.total_pos) + model.alpha * vocab;
  const double denom_neg = static_cast<double>(model.total_neg) + model.alpha * vocab;
  for (const auto& feature : featurize(sentence, config, resources)) {
    if (!model.vocabulary.contains(feature)) continue;
    const auto pos_it = model.feature_count_pos.find(feature);
    const auto neg_it = model.feature_count_neg.find(feature);
    const double count_pos =
        pos_it == model.feature_count_pos.end() ? 0.0 : static_cast<double>(pos_it->second);
    const double count_neg =
        neg_it == model.feature_count_neg.end() ? 0.0 : static_cast<double>(neg_it->second);
    log_pos += std::log((count_pos + model.alpha) / denom_pos);
    log_neg += std::log((count_neg + model.alpha) / denom_neg);
  }
  return log_pos >= log_neg ? Label::positive : Label::negative;
}

}  // namespace conceptsent
