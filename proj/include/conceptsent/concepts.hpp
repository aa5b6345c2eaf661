// Vocabulary-driven concept chunking: decomposes a sentence into a
// bag-of-concepts (single and multi-word) against a known concept vocabulary.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "conceptsent/corpus.hpp"

namespace conceptsent {

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  bool operator==(const TokenSpan&) const = default;
};

// A normalized concept key, optionally anchored to the token range it was
// extracted from (augmented concepts carry no span).
struct Concept {
  std::string key;
  std::optional<TokenSpan> span;
  bool operator==(const Concept&) const = default;
};

// lowercase, whitespace/hyphens -> '_', strips a leading "/c/en/" prefix,
// collapses repeated underscores.
std::string normalize_key(std::string_view surface);

std::size_t key_word_count(std::string_view key);

// Function words elided from concept keys. Prepositions are a separate
// sub-list: they are kept inside a key only when the joined form is itself a
// vocabulary member (go_for_device), otherwise dropped (save_money).
const std::unordered_set<std::string>& stopword_set();
const std::unordered_set<std::string>& preposition_set();
bool is_stopword(const std::string& word);

// Exact-match lookup over normalized concept keys, assembled from the
// sentiment lexicon, knowledge-base nodes, and embedding vocabulary.
class ConceptVocabulary {
 public:
  static constexpr std::size_t max_len = 4;

  void add(std::string_view surface);
  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::unordered_set<std::string> entries_;
};

// Three-pass chunker over the sentence lemmas:
//   1. every contiguous n-gram (n <= 4) starting and ending on a content
//      word is probed against the vocabulary as-is, with prepositions only,
//      and fully elided; every hit is emitted;
//   2. content words left uncovered are paired with a later content word
//      across a short gap (<= 2 function words; intervening content words
//      must already be covered) and probed with/without the prepositions;
//   3. still-uncovered content words are emitted as unigram concepts.
// Output is ordered by start index, longer span first; duplicates preserved.
std::vector<Concept> extract_concepts(const Sentence& sentence,
                                      const ConceptVocabulary& vocab);

// A sentence together with its extracted bag-of-concepts.
struct AnnotatedSentence {
  Sentence sentence;
  std::vector<Concept> concepts;
};

std::vector<AnnotatedSentence> annotate_corpus(std::span<const Sentence> sentences,
                                               const ConceptVocabulary& vocab);

}  // namespace conceptsent
