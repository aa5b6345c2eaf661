// In-context polarity resolution for an ambiguous concept: Naive Bayes over
// the concept's contextual clue sets.
#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "conceptsent/ambiguity.hpp"
#include "conceptsent/context.hpp"

namespace conceptsent {

enum class Polarity { positive, negative };

std::string to_string(Polarity polarity);

struct DisambiguationModel {
  std::string concept_key;
  double prior_pos = 0.5;
  double prior_neg = 0.5;
  std::map<std::string, double> cond_pos;  // Laplace-smoothed, one entry per vocab clue
  std::map<std::string, double> cond_neg;
  std::size_t vocab_size = 0;
  double alpha = 1.0;
  double lexicon_polarity = 0.0;  // static sign, used only to break exact ties
};

// Priors come from the ambiguity record's counts; clue conditionals use
// effective counts (corpus count + augmentation pseudo-count) with Laplace
// smoothing over the union vocabulary of both sets. Throws InvariantError
// when both sets are empty.
DisambiguationModel train_disambiguator(const ContextProfile& profile,
                                        const AmbiguityRecord& record, double alpha,
                                        double lexicon_polarity);

struct Disambiguation {
  Polarity polarity;
  double log_margin = 0.0;  // log posterior(pos) - log posterior(neg)
};

// Clues outside the model vocabulary are dropped; with no retained clue the
// priors decide alone. An exact posterior tie falls back to the sign of the
// concept's static lexicon polarity.
Disambiguation classify_concept(const DisambiguationModel& model,
                                const std::set<std::string>& clues);

using DisambiguationModelMap = std::map<std::string, DisambiguationModel>;

void save_models(const std::filesystem::path& path, const DisambiguationModelMap& models);
DisambiguationModelMap load_models(const std::filesystem::path& path);

}  // namespace conceptsent
