#include "conceptsent/knowledge.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "conceptsent/errors.hpp"

namespace conceptsent {

namespace {

struct RelationName {
  std::string_view name;
  Relation relation;
};

constexpr std::array<RelationName, 26> relation_names = {{
    {"IsA", Relation::IsA},
    {"PartOf", Relation::PartOf},
    {"MemberOf", Relation::MemberOf},
    {"HasA", Relation::HasA},
    {"HasProperty", Relation::HasProperty},
    {"Synonym", Relation::Synonym},
    {"Antonym", Relation::Antonym},
    {"DerivedFrom", Relation::DerivedFrom},
    {"DefinedAs", Relation::DefinedAs},
    {"TranslationOf", Relation::TranslationOf},
    {"SimilarTo", Relation::SimilarTo},
    {"UsedFor", Relation::UsedFor},
    {"CapableOf", Relation::CapableOf},
    {"AtLocation", Relation::AtLocation},
    {"LocatedNear", Relation::LocatedNear},
    {"HasSubevent", Relation::HasSubevent},
    {"HasFirstSubevent", Relation::HasFirstSubevent},
    {"HasLastSubevent", Relation::HasLastSubevent},
    {"HasPrerequisite", Relation::HasPrerequisite},
    {"Causes", Relation::Causes},
    {"Desires", Relation::Desires},
    {"MotivatedByGoal", Relation::MotivatedByGoal},
    {"ObstructedBy", Relation::ObstructedBy},
    {"RelatedTo", Relation::RelatedTo},
    {"CreatedBy", Relation::CreatedBy},
    {"MadeOf", Relation::MadeOf},
}};

}  // namespace

std::optional<Relation> parse_relation(std::string_view name) {
  for (const auto& entry : relation_names) {
    if (entry.name == name) return entry.relation;
  }
  return std::nullopt;
}

std::string_view to_string(Relation relation) {
  for (const auto& entry : relation_names) {
    if (entry.relation == relation) return entry.name;
  }
  throw InvariantError("unreachable relation value");
}

void EdgeStore::add(KnowledgeEdge edge) {
  const std::size_t index = edges_.size();
  incident_[edge.start].push_back(index);
  incident_[edge.end].push_back(index);
  edges_.push_back(std::move(edge));
}

std::span<const std::size_t> EdgeStore::incident(const std::string& key) const {
  const auto it = incident_.find(key);
  if (it == incident_.end()) return {};
  return it->second;
}

EdgeStore load_edges(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge file: " + path.string());
  EdgeStore store;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::array<std::string, 4> fields;
    std::size_t field = 0;
    std::size_t pos = 0;
    while (field < 4) {
      const std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        fields[field++] = line.substr(pos);
        pos = line.size();
        break;
      }
      fields[field++] = line.substr(pos, tab - pos);
      pos = tab + 1;
    }
    if (field != 4 || pos != line.size()) {
      throw SchemaError("edge line " + std::to_string(line_number) +
                        ": expected relation<TAB>start<TAB>end<TAB>weight");
    }

    double weight = 0.0;
    try {
      std::size_t consumed = 0;
      weight = std::stod(fields[3], &consumed);
      if (consumed != fields[3].size()) throw std::invalid_argument(fields[3]);
    } catch (const std::exception&) {
      throw SchemaError("edge line " + std::to_string(line_number) + ": weight \"" +
                        fields[3] + "\" is not a number");
    }

    const auto relation = parse_relation(fields[0]);
    const std::string start = normalize_key(fields[1]);
    const std::string end = normalize_key(fields[2]);
    if (!relation || start.empty() || end.empty() || start == end || weight <= 0.0) {
      store.note_dropped();
      continue;
    }
    store.add(KnowledgeEdge{*relation, start, end, weight});
  }
  return store;
}

const std::vector<double>* EmbeddingStore::find(const std::string& key) const {
  const auto it = vectors_.find(key);
  return it == vectors_.end() ? nullptr : &it->second;
}

void EmbeddingStore::add(std::string_view term, std::vector<double> vector) {
  std::string key = normalize_key(term);
  if (key.empty()) return;
  if (vector.empty()) throw SchemaError("embedding for \"" + key + "\" is empty");
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw SchemaError("embedding for \"" + key + "\" has dimension " +
                      std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
  }
  const bool all_zero = std::all_of(vector.begin(), vector.end(),
                                    [](double x) { return x == 0.0; });
  if (all_zero) throw SchemaError("embedding for \"" + key + "\" is all-zero");
  vectors_[std::move(key)] = std::move(vector);
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path.string());
  EmbeddingStore store;
  std::string line;
  std::size_t line_number = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::istringstream fields(line);
    std::string term;
    fields >> term;
    std::vector<double> values;
    double value = 0.0;
    while (fields >> value) values.push_back(value);
    if (!fields.eof()) {
      throw SchemaError("embedding line " + std::to_string(line_number) +
                        ": non-numeric vector component");
    }

    if (first_content_line) {
      first_content_line = false;
      // Optional `<count> <dim>` header.
      char* parse_end = nullptr;
      std::strtod(term.c_str(), &parse_end);
      if (values.size() == 1 && parse_end != nullptr && *parse_end == '\0') continue;
    }
    if (values.empty()) {
      throw SchemaError("embedding line " + std::to_string(line_number) +
                        ": no vector components");
    }
    store.add(term, std::move(values));
  }
  return store;
}

double cosine(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) {
    throw InvariantError("cosine: dimension mismatch (" + std::to_string(v.size()) +
                         " vs " + std::to_string(w.size()) + ")");
  }
  double dot = 0.0, norm_v = 0.0, norm_w = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    dot += v[i] * w[i];
    norm_v += v[i] * v[i];
    norm_w += w[i] * w[i];
  }
  if (norm_v == 0.0 || norm_w == 0.0) {
    throw InvariantError("cosine: zero vector");
  }
  return dot / (std::sqrt(norm_v) * std::sqrt(norm_w));
}

std::vector<CandidateConcept> neighbors(const std::string& concept_key, const EdgeStore& edges,
                                        const EmbeddingStore& embeddings, std::size_t limit) {
  if (limit < 1) throw InvariantError("neighbors: limit must be >= 1");

  struct Entry {
    double weight;
    Relation relation;
  };
  std::map<std::string, Entry> best;  // neighbor -> strongest incident edge
  for (const std::size_t index : edges.incident(concept_key)) {
    const KnowledgeEdge& edge = edges.edges()[index];
    const std::string& other = edge.start == concept_key ? edge.end : edge.start;
    auto [it, inserted] = best.try_emplace(other, Entry{edge.weight, edge.relation});
    if (!inserted && edge.weight > it->second.weight) {
      it->second = Entry{edge.weight, edge.relation};
    }
  }

  std::vector<std::pair<const std::string*, Entry>> ordered;
  ordered.reserve(best.size());
  for (const auto& [key, entry] : best) ordered.emplace_back(&key, entry);
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second.weight != b.second.weight) return a.second.weight > b.second.weight;
    return *a.first < *b.first;
  });
  if (ordered.size() > limit) ordered.resize(limit);

  std::vector<CandidateConcept> candidates;
  for (const auto& [key, entry] : ordered) {
    if (embeddings.find(*key) == nullptr) continue;
    candidates.push_back(CandidateConcept{*key, entry.relation, 0.0});
  }
  return candidates;
}

double score_candidate(const std::string& candidate, const std::string& ambiguous,
                       const ContextProfile& profile, const EmbeddingStore& embeddings) {
  const auto* candidate_vector = embeddings.find(candidate);
  const auto* ambiguous_vector = embeddings.find(ambiguous);
  if (candidate_vector == nullptr || ambiguous_vector == nullptr) {
    throw InvariantError("score_candidate: \"" + candidate + "\" and \"" + ambiguous +
                         "\" must both have embeddings");
  }
  double score = cosine(*ambiguous_vector, *candidate_vector);
  std::set<std::string> members;
  for (const auto& [key, member] : profile.positive_set) members.insert(key);
  for (const auto& [key, member] : profile.negative_set) members.insert(key);
  for (const auto& key : members) {
    if (const auto* vector = embeddings.find(key)) {
      score += cosine(*vector, *candidate_vector);
    }
  }
  return score;
}

ContextProfile augment_profile(ContextProfile profile, const EdgeStore& edges,
                               const EmbeddingStore& embeddings,
                               const AugmentOptions& options) {
  if (options.top_m == 0) return profile;
  const auto* ambiguous_vector = embeddings.find(profile.ambiguous_concept);
  if (ambiguous_vector == nullptr) return profile;

  struct Scored {
    CandidateConcept candidate;
    double share_pos = 0.0;
    double share_neg = 0.0;
    double pseudo_pos = 0.0;
    double pseudo_neg = 0.0;
  };

  // Scores and side affinities are computed against the profile as collected
  // from the corpus; additions do not feed back into later candidates.
  std::vector<Scored> scored;
  for (auto& candidate :
       neighbors(profile.ambiguous_concept, edges, embeddings, options.neighbor_limit)) {
    if (profile.positive_set.contains(candidate.concept_key) ||
        profile.negative_set.contains(candidate.concept_key) ||
        candidate.concept_key == profile.ambiguous_concept) {
      continue;
    }
    Scored entry;
    entry.candidate = std::move(candidate);
    entry.candidate.similarity =
        score_candidate(entry.candidate.concept_key, profile.ambiguous_concept, profile, embeddings);
    const auto* candidate_vector = embeddings.find(entry.candidate.concept_key);
    for (const auto& [key, member] : profile.positive_set) {
      if (const auto* vector = embeddings.find(key)) {
        const double similarity = cosine(*vector, *candidate_vector);
        entry.share_pos += similarity;
        entry.pseudo_pos += similarity * static_cast<double>(member.count);
      }
    }
    for (const auto& [key, member] : profile.negative_set) {
      if (const auto* vector = embeddings.find(key)) {
        const double similarity = cosine(*vector, *candidate_vector);
        entry.share_neg += similarity;
        entry.pseudo_neg += similarity * static_cast<double>(member.count);
      }
    }
    scored.push_back(std::move(entry));
  }

  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.candidate.similarity != b.candidate.similarity) {
      return a.candidate.similarity > b.candidate.similarity;
    }
    return a.candidate.concept_key < b.candidate.concept_key;
  });

  // The top-m slots are consumed by rank; a candidate dropped for an exact
  // side tie (or a non-positive pseudo-count) does not free its slot.
  std::size_t considered = 0;
  for (const auto& entry : scored) {
    if (considered == options.top_m) break;
    if (entry.candidate.similarity <= 0.0) break;  // sorted, rest are lower
    ++considered;
    if (entry.share_pos == entry.share_neg) continue;
    const bool to_positive = entry.share_pos > entry.share_neg;
    const double pseudo = to_positive ? entry.pseudo_pos : entry.pseudo_neg;
    if (pseudo <= 0.0) continue;
    auto& destination = to_positive ? profile.positive_set : profile.negative_set;
    destination[entry.candidate.concept_key] = ContextMember{0, 0.0, pseudo};
  }
  profile.m_pos = static_cast<std::int64_t>(profile.positive_set.size());
  profile.m_neg = static_cast<std::int64_t>(profile.negative_set.size());
  return profile;
}

}  // namespace conceptsent
