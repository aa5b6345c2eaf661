#include "conceptsent/ambiguity.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "conceptsent/errors.hpp"

namespace conceptsent {

std::map<std::string, OccurrenceCounts> count_occurrences(
    std::span<const AnnotatedSentence> sentences, const SentimentResource& resource) {
  std::map<std::string, OccurrenceCounts> counts;
  for (const auto& annotated : sentences) {
    const Label label = annotated.sentence.label;
    if (label == Label::neutral) continue;
    std::set<std::string> seen;
    for (const auto& item : annotated.concepts) {
      if (!resource.contains(item.key)) continue;
      if (!seen.insert(item.key).second) continue;
      auto& entry = counts[item.key];
      if (label == Label::positive) {
        ++entry.pos;
      } else {
        ++entry.neg;
      }
    }
  }
  return counts;
}

AmbiguityRecord compute_statistics(const std::string& concept_key, OccurrenceCounts counts,
                                   double pos_score, double neg_score, double threshold) {
  if (counts.pos + counts.neg < 1) {
    throw InvariantError("compute_statistics: concept \"" + concept_key +
                         "\" has no observations");
  }
  if (pos_score <= 0.0 || neg_score <= 0.0) {
    throw InvariantError("compute_statistics: scores must be positive magnitudes");
  }
  AmbiguityRecord record;
  record.concept_key = concept_key;
  record.pos_count = counts.pos;
  record.neg_count = counts.neg;
  record.pos_score = pos_score;
  record.neg_score = neg_score;

  const double total = static_cast<double>(counts.pos + counts.neg);
  const double pos = static_cast<double>(counts.pos);
  const double neg = static_cast<double>(counts.neg);
  record.mu = (pos * pos_score - neg * neg_score) / total;
  const double dev_pos = record.mu - pos_score;
  const double dev_neg = record.mu + neg_score;
  record.delta = std::sqrt((dev_pos * dev_pos * pos + dev_neg * dev_neg * neg) / total);
  record.ambiguous = record.delta > threshold;
  return record;
}

AmbiguityPartition detect_ambiguous(std::vector<AmbiguityRecord> records, double threshold) {
  AmbiguityPartition partition;
  for (auto& record : records) {
    record.ambiguous = record.delta > threshold;
    if (record.ambiguous) {
      partition.ambiguous.push_back(std::move(record));
    } else {
      partition.unambiguous.push_back(std::move(record));
    }
  }
  return partition;
}

AmbiguityPartition detect_ambiguous_concepts(std::span<const AnnotatedSentence> sentences,
                                             const SentimentResource& resource,
                                             double threshold, ScoreMode score_mode) {
  const auto counts = count_occurrences(sentences, resource);

  std::map<std::string, std::pair<double, double>> score_sums;  // |score| sums per side
  if (score_mode == ScoreMode::mean_sentence_score) {
    for (const auto& annotated : sentences) {
      const Label label = annotated.sentence.label;
      if (label == Label::neutral) continue;
      std::set<std::string> seen;
      for (const auto& item : annotated.concepts) {
        if (!counts.contains(item.key)) continue;
        if (!seen.insert(item.key).second) continue;
        auto& sums = score_sums[item.key];
        if (label == Label::positive) {
          sums.first += std::abs(annotated.sentence.score);
        } else {
          sums.second += std::abs(annotated.sentence.score);
        }
      }
    }
  }

  std::vector<AmbiguityRecord> records;
  records.reserve(counts.size());
  for (const auto& [key, occurrence] : counts) {
    double pos_score = 1.0;
    double neg_score = 1.0;
    if (score_mode == ScoreMode::mean_sentence_score) {
      const auto& sums = score_sums[key];
      if (occurrence.pos > 0 && sums.first > 0.0) {
        pos_score = sums.first / static_cast<double>(occurrence.pos);
      }
      if (occurrence.neg > 0 && sums.second > 0.0) {
        neg_score = sums.second / static_cast<double>(occurrence.neg);
      }
    }
    records.push_back(compute_statistics(key, occurrence, pos_score, neg_score, threshold));
  }
  return detect_ambiguous(std::move(records), threshold);
}

namespace {

nlohmann::json record_to_json(const AmbiguityRecord& record) {
  nlohmann::json value;
  value["concept"] = record.concept_key;
  value["pos_count"] = record.pos_count;
  value["neg_count"] = record.neg_count;
  value["pos_score"] = record.pos_score;
  value["neg_score"] = record.neg_score;
  value["mu"] = record.mu;
  value["delta"] = record.delta;
  value["ambiguous"] = record.ambiguous;
  return value;
}

AmbiguityRecord record_from_json(const nlohmann::json& value) {
  AmbiguityRecord record;
  record.concept_key = value.at("concept").get<std::string>();
  record.pos_count = value.at("pos_count").get<std::int64_t>();
  record.neg_count = value.at("neg_count").get<std::int64_t>();
  record.pos_score = value.at("pos_score").get<double>();
  record.neg_score = value.at("neg_score").get<double>();
  record.mu = value.at("mu").get<double>();
  record.delta = value.at("delta").get<double>();
  record.ambiguous = value.at("ambiguous").get<bool>();
  return record;
}

}  // namespace

void save_partition(const std::filesystem::path& path, const AmbiguityPartition& partition,
                    double threshold) {
  nlohmann::json doc;
  doc["threshold"] = threshold;
  doc["ambiguous"] = nlohmann::json::array();
  doc["unambiguous"] = nlohmann::json::array();
  for (const auto& record : partition.ambiguous) doc["ambiguous"].push_back(record_to_json(record));
  for (const auto& record : partition.unambiguous) {
    doc["unambiguous"].push_back(record_to_json(record));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << doc.dump(2) << '\n';
}

AmbiguityPartition load_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open partition file: " + path.string());
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw SchemaError("partition file is not a JSON object: " + path.string());
  }
  AmbiguityPartition partition;
  for (const auto& value : doc.at("ambiguous")) partition.ambiguous.push_back(record_from_json(value));
  for (const auto& value : doc.at("unambiguous")) {
    partition.unambiguous.push_back(record_from_json(value));
  }
  return partition;
}

}  // namespace conceptsent
