// Corpus loading and text normalization: tokenization, rule-based
// lemmatization, and negation-marker detection.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace conceptsent {

enum class Label { positive, negative, neutral };

std::string to_string(Label label);
Label parse_label(std::string_view text);  // throws SchemaError on unknown value

// One labeled review sentence. Immutable after construction; safe to share
// across threads.
struct Sentence {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;
  std::vector<std::string> lemmas;
  Label label = Label::neutral;
  double score = 0.0;  // sign agrees with label; 0 iff neutral
  bool has_negation = false;

  bool operator==(const Sentence&) const = default;
};

using AbbreviationTable = std::map<std::string, std::string>;

// ~30 chat abbreviations and apostrophe-less misspellings, substituted
// whole-word before tokenization.
const AbbreviationTable& default_abbreviations();

// Negation markers plus the "n't" clitic rule (checked separately).
const std::unordered_set<std::string>& default_negation_markers();

struct PreprocessOptions {
  const AbbreviationTable* abbreviations = &default_abbreviations();
  const std::unordered_set<std::string>* negation_markers =
      &default_negation_markers();
};

// Lowercase, separate punctuation (keeping intra-word apostrophes), squeeze
// letter runs of length >= 3 down to 2, expand abbreviations.
std::string normalize_text(std::string_view raw, const AbbreviationTable& abbreviations);

// Whitespace split of normalized text; tokens without an alphanumeric
// character are dropped.
std::vector<std::string> tokenize(std::string_view normalized);

// Deterministic suffix-rule lemmatizer with a fixed irregular table.
// Identity fallback; idempotent.
std::string lemmatize(std::string_view token);

bool detect_negation(std::span<const std::string> tokens,
                     const std::unordered_set<std::string>& markers);
bool detect_negation(std::span<const std::string> tokens);

// Builds a Sentence from one corpus record, running the full normalization
// pipeline. Throws SchemaError if score is out of [-1,1] or disagrees in
// sign with the label.
Sentence make_sentence(std::string id, std::string text, Label label,
                       std::optional<double> score,
                       const PreprocessOptions& options = {});

// Reads a JSON Lines corpus ({"id","text","label"[,"score"]} per line).
// Errors name the offending line number.
std::vector<Sentence> load_corpus(const std::filesystem::path& path,
                                  const PreprocessOptions& options = {});

// Corpus-record form: {"id","text","label","score"}. Reloading a serialized
// record reproduces the Sentence bit-for-bit (the pipeline is deterministic).
std::string to_record_json(const Sentence& sentence);
Sentence from_record_json(std::string_view json_text,
                          const PreprocessOptions& options = {});

// Preprocessed form adds tokens/lemmas/has_negation so downstream stages can
// skip normalization.
std::string to_sentence_json(const Sentence& sentence);

// Writes one preprocessed Sentence per line.
void save_sentences(const std::filesystem::path& path,
                    std::span<const Sentence> sentences);

// Reads either raw corpus records or preprocessed Sentence lines (detected
// per line by the presence of "tokens").
std::vector<Sentence> load_sentences(const std::filesystem::path& path,
                                     const PreprocessOptions& options = {});

// Parses a single abbreviation table file: `short<TAB>expansion` per line,
// `#` comments.
AbbreviationTable load_abbreviations(const std::filesystem::path& path);

// Parses a negation-marker list: one marker per line, `#` comments.
std::unordered_set<std::string> load_negation_markers(const std::filesystem::path& path);

}  // namespace conceptsent
