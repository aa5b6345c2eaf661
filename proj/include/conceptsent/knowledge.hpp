// Commonsense knowledge backing: relation-whitelisted edge store, dense
// embedding store, cosine similarity, and profile augmentation with
// knowledge-graph neighbors.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conceptsent/context.hpp"

namespace conceptsent {

enum class Relation {
  IsA, PartOf, MemberOf, HasA, HasProperty, Synonym, Antonym, DerivedFrom,
  DefinedAs, TranslationOf, SimilarTo, UsedFor, CapableOf, AtLocation,
  LocatedNear, HasSubevent, HasFirstSubevent, HasLastSubevent,
  HasPrerequisite, Causes, Desires, MotivatedByGoal, ObstructedBy,
  RelatedTo, CreatedBy, MadeOf,
};

std::optional<Relation> parse_relation(std::string_view name);
std::string_view to_string(Relation relation);

struct KnowledgeEdge {
  Relation relation;
  std::string start;
  std::string end;
  double weight = 1.0;
};

// Undirected neighbor index over the whitelisted edges. Edges with an
// unknown relation, an empty key after normalization, a self-loop, or a
// non-positive weight are dropped and counted.
class EdgeStore {
 public:
  void add(KnowledgeEdge edge);
  std::span<const KnowledgeEdge> edges() const { return edges_; }
  std::span<const std::size_t> incident(const std::string& key) const;
  std::int64_t dropped_count() const { return dropped_; }
  void note_dropped() { ++dropped_; }

 private:
  std::vector<KnowledgeEdge> edges_;
  std::map<std::string, std::vector<std::size_t>> incident_;
  std::int64_t dropped_ = 0;
};

EdgeStore load_edges(const std::filesystem::path& path);

// Dense vectors keyed by normalized concept; all vectors share one
// dimension and all-zero vectors are rejected.
class EmbeddingStore {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<double>* find(const std::string& key) const;
  void add(std::string_view term, std::vector<double> vector);
  const std::map<std::string, std::vector<double>>& vectors() const { return vectors_; }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

// Text format: optional `<count> <dim>` header, then `term v1 ... vdim`.
EmbeddingStore load_embeddings(const std::filesystem::path& path);

// Throws InvariantError on dimension mismatch or an all-zero vector.
double cosine(std::span<const double> v, std::span<const double> w);

struct CandidateConcept {
  std::string concept_key;
  Relation via_relation;
  double similarity = 0.0;  // filled by scoring
};

// The other endpoint of every incident edge, deduplicated keeping the
// max-weight edge, ordered by descending weight (ties by key), truncated to
// `limit`, then filtered to candidates that have an embedding.
std::vector<CandidateConcept> neighbors(const std::string& concept_key, const EdgeStore& edges,
                                        const EmbeddingStore& embeddings, std::size_t limit);

// cos(ambiguous, candidate) plus the cosine to every embedded member of the
// union of both context sets.
double score_candidate(const std::string& candidate, const std::string& ambiguous,
                       const ContextProfile& profile, const EmbeddingStore& embeddings);

struct AugmentOptions {
  std::size_t top_m = 5;          // candidates added per profile
  std::size_t neighbor_limit = 50;
};

// Scores the graph neighbors of the profile's ambiguous concept and adds the
// top-m positively scored ones to the side whose members attract them more,
// with a similarity-weighted pseudo-count. Ties between sides are dropped.
// Returns the profile unchanged when the ambiguous concept has no embedding.
ContextProfile augment_profile(ContextProfile profile, const EdgeStore& edges,
                               const EmbeddingStore& embeddings,
                               const AugmentOptions& options = {});

}  // namespace conceptsent
