#include "conceptsent/concepts.hpp"

#include <algorithm>

#include "conceptsent/errors.hpp"

namespace conceptsent {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string join_keys(std::span<const std::string_view> words) {
  std::string key;
  for (const auto& w : words) {
    if (!key.empty()) key += '_';
    key += w;
  }
  return key;
}

}  // namespace

std::string normalize_key(std::string_view surface) {
  constexpr std::string_view prefix = "/c/en/";
  if (surface.substr(0, prefix.size()) == prefix) surface.remove_prefix(prefix.size());

  std::string key;
  key.reserve(surface.size());
  for (char c : surface) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c == ' ' || c == '\t' || c == '-' || c == '_') {
      if (!key.empty() && key.back() != '_') key += '_';
    } else {
      key += c;
    }
  }
  while (!key.empty() && key.back() == '_') key.pop_back();
  return key;
}

std::size_t key_word_count(std::string_view key) {
  if (key.empty()) return 0;
  return 1 + static_cast<std::size_t>(std::count(key.begin(), key.end(), '_'));
}

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> words = {
      // articles & demonstratives
      "a", "an", "the", "this", "that", "these", "those",
      // pronouns
      "i", "me", "my", "you", "your", "he", "him", "his", "she", "her",
      "it", "its", "we", "us", "our", "they", "them", "their",
      // clitic forms
      "i'd", "i'll", "i'm", "i've", "you'd", "you'll", "you're", "you've",
      "he's", "she's", "it's", "we're", "they're", "that's", "there's",
      // auxiliaries & modals
      "be", "am", "is", "are", "was", "were", "been", "being",
      "do", "does", "did", "have", "has", "had",
      "will", "would", "should", "can", "could", "may", "might",
      // conjunctions
      "and", "or", "but", "if", "so", "because", "while", "than",
      // prepositions (see preposition_set)
      "of", "in", "on", "at", "by", "for", "with", "to", "from",
      "about", "into", "over", "under", "after", "before", "between",
      "during", "through",
      // frequent fillers
      "as", "there", "here", "when", "what", "which", "who", "how", "very",
  };
  return words;
}

const std::unordered_set<std::string>& preposition_set() {
  static const std::unordered_set<std::string> words = {
      "of", "in", "on", "at", "by", "for", "with", "to", "from",
      "about", "into", "over", "under", "after", "before", "between",
      "during", "through",
  };
  return words;
}

bool is_stopword(const std::string& word) {
  return stopword_set().contains(word) || (word.size() > 3 && ends_with(word, "n't"));
}

void ConceptVocabulary::add(std::string_view surface) {
  std::string key = normalize_key(surface);
  if (key.empty()) return;
  if (key_word_count(key) > max_len) return;
  entries_.insert(std::move(key));
}

namespace {

struct Emitted {
  Concept item;
  bool multi_word = false;
};

// Probes one contiguous span: the exact key, the key with only prepositions
// kept among the function words, and the fully elided key. First vocabulary
// hit wins. Spans bordered by function words are probed exact-only.
std::optional<std::string> probe_span(std::span<const std::string> lemmas,
                                      std::size_t begin, std::size_t end,
                                      const ConceptVocabulary& vocab,
                                      const std::vector<bool>& content) {
  std::vector<std::string_view> full, with_preps, elided;
  for (std::size_t t = begin; t < end; ++t) {
    full.push_back(lemmas[t]);
    if (content[t]) {
      with_preps.push_back(lemmas[t]);
      elided.push_back(lemmas[t]);
    } else if (preposition_set().contains(lemmas[t])) {
      with_preps.push_back(lemmas[t]);
    }
  }

  if (full.size() <= ConceptVocabulary::max_len) {
    std::string key = join_keys(full);
    if (vocab.contains(key)) return key;
  }
  if (!content[begin] || !content[end - 1]) return std::nullopt;

  if (with_preps.size() != full.size() && with_preps.size() <= ConceptVocabulary::max_len) {
    std::string key = join_keys(with_preps);
    if (vocab.contains(key)) return key;
  }
  if (elided.size() != with_preps.size() && !elided.empty() &&
      elided.size() <= ConceptVocabulary::max_len) {
    std::string key = join_keys(elided);
    if (vocab.contains(key)) return key;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Concept> extract_concepts(const Sentence& sentence,
                                      const ConceptVocabulary& vocab) {
  const auto& lemmas = sentence.lemmas;
  const std::size_t n = lemmas.size();
  if (n == 0) return {};

  std::vector<bool> content(n);
  for (std::size_t t = 0; t < n; ++t) content[t] = !is_stopword(lemmas[t]) && !is_stopword(sentence.tokens[t]);

  std::vector<Emitted> emitted;
  std::vector<bool> covered(n, false);        // by any emitted concept
  std::vector<bool> covered_multi(n, false);  // by a multi-word concept

  const auto emit = [&](std::string key, std::size_t begin, std::size_t end) {
    const bool multi = end - begin > 1;
    for (std::size_t t = begin; t < end; ++t) {
      covered[t] = true;
      if (multi) covered_multi[t] = true;
    }
    emitted.push_back(Emitted{Concept{std::move(key), TokenSpan{begin, end}}, multi});
  };

  // Pass 1: contiguous n-grams, all lengths at every start.
  for (std::size_t begin = 0; begin < n; ++begin) {
    const std::size_t longest = std::min(ConceptVocabulary::max_len, n - begin);
    for (std::size_t len = longest; len >= 1; --len) {
      if (len == 1 && !content[begin]) break;
      if (auto key = probe_span(lemmas, begin, begin + len, vocab, content)) {
        emit(*key, begin, begin + len);
      }
    }
  }

  // Pass 2: content words outside any multi-word chunk pair up with a later
  // content word across a short gap. Gap tokens must be function words
  // (at most 2) or content already claimed by a multi-word chunk.
  for (std::size_t i = 0; i < n; ++i) {
    if (!content[i] || covered_multi[i]) continue;
    for (std::size_t j = i + 2; j < n && j - i - 1 <= 3; ++j) {
      if (!content[j]) continue;
      std::vector<std::string_view> gap_preps;
      std::size_t function_count = 0;
      bool eligible = true;
      for (std::size_t t = i + 1; t < j; ++t) {
        if (content[t]) {
          if (!covered_multi[t]) {
            eligible = false;
            break;
          }
        } else {
          ++function_count;
          if (preposition_set().contains(lemmas[t])) gap_preps.push_back(lemmas[t]);
        }
      }
      if (!eligible || function_count > 2) continue;

      std::vector<std::string_view> with_preps;
      with_preps.push_back(lemmas[i]);
      with_preps.insert(with_preps.end(), gap_preps.begin(), gap_preps.end());
      with_preps.push_back(lemmas[j]);

      std::optional<std::string> match;
      if (with_preps.size() <= ConceptVocabulary::max_len) {
        std::string key = join_keys(with_preps);
        if (vocab.contains(key)) match = std::move(key);
      }
      if (!match && !gap_preps.empty()) {
        std::string key = std::string(lemmas[i]) + "_" + std::string(lemmas[j]);
        if (vocab.contains(key)) match = std::move(key);
      }
      if (match) {
        emit(*match, i, j + 1);
        break;
      }
    }
  }

  // Pass 3: uncovered content words become unigram concepts.
  for (std::size_t t = 0; t < n; ++t) {
    if (content[t] && !covered[t]) {
      emitted.push_back(Emitted{Concept{lemmas[t], TokenSpan{t, t + 1}}, false});
    }
  }

  std::sort(emitted.begin(), emitted.end(), [](const Emitted& a, const Emitted& b) {
    const auto& sa = *a.item.span;
    const auto& sb = *b.item.span;
    if (sa.begin != sb.begin) return sa.begin < sb.begin;
    const std::size_t la = sa.end - sa.begin;
    const std::size_t lb = sb.end - sb.begin;
    if (la != lb) return la > lb;
    return a.item.key < b.item.key;
  });

  std::vector<Concept> result;
  result.reserve(emitted.size());
  for (auto& e : emitted) result.push_back(std::move(e.item));
  return result;
}

std::vector<AnnotatedSentence> annotate_corpus(std::span<const Sentence> sentences,
                                               const ConceptVocabulary& vocab) {
  std::vector<AnnotatedSentence> annotated;
  annotated.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    annotated.push_back({sentence, extract_concepts(sentence, vocab)});
  }
  return annotated;
}

}  // namespace conceptsent
