// Context profiles for ambiguous concepts: positive/negative contextual
// concept sets collected per sentence polarity (reversed under negation) and
// filtered by pointwise mutual information.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "conceptsent/concepts.hpp"

namespace conceptsent {

// Sentence-level occurrence index over the non-neutral corpus; backs the PMI
// probabilities.
class CorpusStats {
 public:
  CorpusStats() = default;
  explicit CorpusStats(std::span<const AnnotatedSentence> sentences);

  std::int64_t total_sentences() const { return total_; }
  std::int64_t sentence_count(const std::string& key) const;
  std::int64_t cooccurrence_count(const std::string& a, const std::string& b) const;

 private:
  std::int64_t total_ = 0;
  std::map<std::string, std::vector<std::int32_t>> postings_;
};

struct ContextMember {
  std::int64_t count = 0;       // co-occurrence additions from the corpus
  double pmi = 0.0;
  double pseudo_count = 0.0;    // > 0 only for augmented members
  bool operator==(const ContextMember&) const = default;
};

struct ContextProfile {
  std::string ambiguous_concept;
  std::map<std::string, ContextMember> positive_set;
  std::map<std::string, ContextMember> negative_set;
  std::int64_t m_pos = 0;
  std::int64_t m_neg = 0;
};

struct RawContext {
  std::map<std::string, std::int64_t> positive;
  std::map<std::string, std::int64_t> negative;
};

// Adds every co-occurring concept of each non-neutral sentence containing
// the ambiguous concept to the set matching the sentence label; a negation
// marker in the sentence reverses the destination set.
RawContext collect_context(const std::string& ambiguous,
                           std::span<const AnnotatedSentence> sentences);

// Eq.-style ratio p(a,c) / (p(a) p(c)) with sentence-level probabilities.
// No logarithm is applied, so independence sits at 1.0; never co-occurring
// concepts yield 0. Throws InvariantError if either marginal is zero.
double pmi(const std::string& a, const std::string& c, const CorpusStats& stats);

struct RetentionRule {
  double pmi_min = 1.0;   // keep members with pmi strictly above this
  std::size_t top_k = 20; // then keep the k best per set
};

// Ranks by pmi descending, ties by higher count then lexicographic key.
ContextProfile filter_context(const std::string& ambiguous, const RawContext& raw,
                              const CorpusStats& stats, const RetentionRule& rule = {});

using ProfileMap = std::map<std::string, ContextProfile>;

void save_profiles(const std::filesystem::path& path, const ProfileMap& profiles);
ProfileMap load_profiles(const std::filesystem::path& path);

}  // namespace conceptsent
