// Sentiment concept resource: loads the tabular lexicon and materializes
// semantic equivalents as entries of their own.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace conceptsent {

struct SentimentEntry {
  std::string concept_key;
  double polarity_value = 0.0;  // in [-1,1], never 0
  std::vector<std::string> equivalents;

  bool operator==(const SentimentEntry&) const = default;
};

// Keyed by normalized concept key; ordered so serialization is stable.
using SentimentResource = std::map<std::string, SentimentEntry>;

// Lexicon TSV: `concept<TAB>polarity_value[<TAB>equiv1|equiv2|...]`,
// `#` comments. Each equivalent becomes its own entry carrying the parent's
// polarity unless it has a row of its own (the own row wins). Zero-polarity
// rows carry no sentiment and are skipped.
SentimentResource build_resource(const std::filesystem::path& lexicon_path);

void save_resource(const std::filesystem::path& path, const SentimentResource& resource);
SentimentResource load_resource(const std::filesystem::path& path);

}  // namespace conceptsent
