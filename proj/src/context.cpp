#include "conceptsent/context.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "conceptsent/errors.hpp"

namespace conceptsent {

CorpusStats::CorpusStats(std::span<const AnnotatedSentence> sentences) {
  std::int32_t index = 0;
  for (const auto& annotated : sentences) {
    if (annotated.sentence.label == Label::neutral) continue;
    std::set<std::string> unique;
    for (const auto& item : annotated.concepts) unique.insert(item.key);
    for (const auto& key : unique) postings_[key].push_back(index);
    ++index;
  }
  total_ = index;
}

std::int64_t CorpusStats::sentence_count(const std::string& key) const {
  const auto it = postings_.find(key);
  return it == postings_.end() ? 0 : static_cast<std::int64_t>(it->second.size());
}

std::int64_t CorpusStats::cooccurrence_count(const std::string& a, const std::string& b) const {
  const auto ia = postings_.find(a);
  const auto ib = postings_.find(b);
  if (ia == postings_.end() || ib == postings_.end()) return 0;
  const auto& pa = ia->second;
  const auto& pb = ib->second;
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i] == pb[j]) {
      ++count;
      ++i;
      ++j;
    } else if (pa[i] < pb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return count;
}

RawContext collect_context(const std::string& ambiguous,
                           std::span<const AnnotatedSentence> sentences) {
  RawContext raw;
  for (const auto& annotated : sentences) {
    const Label label = annotated.sentence.label;
    if (label == Label::neutral) continue;
    const bool present = std::any_of(
        annotated.concepts.begin(), annotated.concepts.end(),
        [&](const Concept& c) { return c.key == ambiguous; });
    if (!present) continue;

    // Negation reverses the destination set.
    bool to_positive = label == Label::positive;
    if (annotated.sentence.has_negation) to_positive = !to_positive;
    auto& destination = to_positive ? raw.positive : raw.negative;
    for (const auto& item : annotated.concepts) {
      if (item.key == ambiguous) continue;
      ++destination[item.key];
    }
  }
  return raw;
}

double pmi(const std::string& a, const std::string& c, const CorpusStats& stats) {
  const std::int64_t count_a = stats.sentence_count(a);
  const std::int64_t count_c = stats.sentence_count(c);
  if (count_a == 0 || count_c == 0 || stats.total_sentences() == 0) {
    throw InvariantError("pmi: \"" + a + "\" / \"" + c +
                         "\" must both occur in the corpus");
  }
  const double n = static_cast<double>(stats.total_sentences());
  const double joint = static_cast<double>(stats.cooccurrence_count(a, c)) / n;
  const double marginal_a = static_cast<double>(count_a) / n;
  const double marginal_c = static_cast<double>(count_c) / n;
  return joint / (marginal_a * marginal_c);
}

ContextProfile filter_context(const std::string& ambiguous, const RawContext& raw,
                              const CorpusStats& stats, const RetentionRule& rule) {
  ContextProfile profile;
  profile.ambiguous_concept = ambiguous;

  const auto retain = [&](const std::map<std::string, std::int64_t>& members,
                          std::map<std::string, ContextMember>& out) {
    struct Scored {
      const std::string* key;
      std::int64_t count;
      double pmi_value;
    };
    std::vector<Scored> scored;
    scored.reserve(members.size());
    for (const auto& [key, count] : members) {
      const double value = pmi(ambiguous, key, stats);
      if (value > rule.pmi_min) scored.push_back({&key, count, value});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.pmi_value != b.pmi_value) return a.pmi_value > b.pmi_value;
      if (a.count != b.count) return a.count > b.count;
      return *a.key < *b.key;
    });
    if (scored.size() > rule.top_k) scored.resize(rule.top_k);
    for (const auto& member : scored) {
      out[*member.key] = ContextMember{member.count, member.pmi_value, 0.0};
    }
  };

  retain(raw.positive, profile.positive_set);
  retain(raw.negative, profile.negative_set);
  profile.m_pos = static_cast<std::int64_t>(profile.positive_set.size());
  profile.m_neg = static_cast<std::int64_t>(profile.negative_set.size());
  return profile;
}

namespace {

nlohmann::json set_to_json(const std::map<std::string, ContextMember>& members) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, member] : members) {
    out[key] = {{"count", member.count}, {"pmi", member.pmi},
                {"pseudo_count", member.pseudo_count}};
  }
  return out;
}

std::map<std::string, ContextMember> set_from_json(const nlohmann::json& value) {
  std::map<std::string, ContextMember> members;
  for (const auto& [key, entry] : value.items()) {
    members[key] = ContextMember{entry.at("count").get<std::int64_t>(),
                                 entry.at("pmi").get<double>(),
                                 entry.at("pseudo_count").get<double>()};
  }
  return members;
}

}  // namespace

void save_profiles(const std::filesystem::path& path, const ProfileMap& profiles) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, profile] : profiles) {
    nlohmann::json value;
    value["ambiguous_concept"] = profile.ambiguous_concept;
    value["positive_set"] = set_to_json(profile.positive_set);
    value["negative_set"] = set_to_json(profile.negative_set);
    value["m_pos"] = profile.m_pos;
    value["m_neg"] = profile.m_neg;
    doc[key] = std::move(value);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << doc.dump(2) << '\n';
}

ProfileMap load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profiles file: " + path.string());
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw SchemaError("profiles file is not a JSON object: " + path.string());
  }
  ProfileMap profiles;
  for (const auto& [key, value] : doc.items()) {
    ContextProfile profile;
    profile.ambiguous_concept = value.at("ambiguous_concept").get<std::string>();
    profile.positive_set = set_from_json(value.at("positive_set"));
    profile.negative_set = set_from_json(value.at("negative_set"));
    profile.m_pos = value.at("m_pos").get<std::int64_t>();
    profile.m_neg = value.at("m_neg").get<std::int64_t>();
    profiles[key] = std::move(profile);
  }
  return profiles;
}

}  // namespace conceptsent
