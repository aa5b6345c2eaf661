#include "conceptsent/disambiguator.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "conceptsent/errors.hpp"

namespace conceptsent {

std::string to_string(Polarity polarity) {
  return polarity == Polarity::positive ? "positive" : "negative";
}

DisambiguationModel train_disambiguator(const ContextProfile& profile,
                                        const AmbiguityRecord& record, double alpha,
                                        double lexicon_polarity) {
  if (profile.positive_set.empty() && profile.negative_set.empty()) {
    throw InvariantError("train_disambiguator: profile for \"" + profile.ambiguous_concept +
                         "\" is empty on both sides");
  }
  if (alpha <= 0.0) throw InvariantError("train_disambiguator: alpha must be > 0");
  if (record.pos_count + record.neg_count < 1) {
    throw InvariantError("train_disambiguator: record has no observations");
  }

  DisambiguationModel model;
  model.concept_key = profile.ambiguous_concept;
  model.alpha = alpha;
  model.lexicon_polarity = lexicon_polarity;

  const double total_count = static_cast<double>(record.pos_count + record.neg_count);
  model.prior_pos = static_cast<double>(record.pos_count) / total_count;
  model.prior_neg = static_cast<double>(record.neg_count) / total_count;

  std::set<std::string> vocabulary;
  for (const auto& [key, member] : profile.positive_set) vocabulary.insert(key);
  for (const auto& [key, member] : profile.negative_set) vocabulary.insert(key);
  model.vocab_size = vocabulary.size();

  const auto effective = [](const std::map<std::string, ContextMember>& side,
                            const std::string& key) {
    const auto it = side.find(key);
    if (it == side.end()) return 0.0;
    return static_cast<double>(it->second.count) + it->second.pseudo_count;
  };

  double total_pos = 0.0, total_neg = 0.0;
  for (const auto& key : vocabulary) {
    total_pos += effective(profile.positive_set, key);
    total_neg += effective(profile.negative_set, key);
  }
  const double denom_pos = total_pos + alpha * static_cast<double>(model.vocab_size);
  const double denom_neg = total_neg + alpha * static_cast<double>(model.vocab_size);
  for (const auto& key : vocabulary) {
    model.cond_pos[key] = (effective(profile.positive_set, key) + alpha) / denom_pos;
    model.cond_neg[key] = (effective(profile.negative_set, key) + alpha) / denom_neg;
  }
  return model;
}

Disambiguation classify_concept(const DisambiguationModel& model,
                                const std::set<std::string>& clues) {
  double log_pos = std::log(model.prior_pos);
  double log_neg = std::log(model.prior_neg);
  for (const auto& clue : clues) {
    const auto pos_it = model.cond_pos.find(clue);
    if (pos_it == model.cond_pos.end()) continue;  // outside the vocabulary
    log_pos += std::log(pos_it->second);
    log_neg += std::log(model.cond_neg.at(clue));
  }

  Disambiguation result;
  if (log_pos == log_neg) {
    result.polarity = model.lexicon_polarity >= 0.0 ? Polarity::positive : Polarity::negative;
    result.log_margin = 0.0;
    return result;
  }
  result.log_margin = log_pos - log_neg;
  result.polarity = log_pos > log_neg ? Polarity::positive : Polarity::negative;
  return result;
}

void save_models(const std::filesystem::path& path, const DisambiguationModelMap& models) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, model] : models) {
    nlohmann::json value;
    value["concept"] = model.concept_key;
    value["prior_pos"] = model.prior_pos;
    value["prior_neg"] = model.prior_neg;
    value["cond_pos"] = model.cond_pos;
    value["cond_neg"] = model.cond_neg;
    value["vocab_size"] = model.vocab_size;
    value["alpha"] = model.alpha;
    value["lexicon_polarity"] = model.lexicon_polarity;
    doc[key] = std::move(value);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << doc.dump(2) << '\n';
}

DisambiguationModelMap load_models(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw SchemaError("model file is not a JSON object: " + path.string());
  }
  // A pipeline bundle stores the same map under this key.
  if (doc.contains("disambiguation_models")) doc = doc["disambiguation_models"];
  DisambiguationModelMap models;
  for (const auto& [key, value] : doc.items()) {
    DisambiguationModel model;
    model.concept_key = value.at("concept").get<std::string>();
    model.prior_pos = value.at("prior_pos").get<double>();
    model.prior_neg = value.at("prior_neg").get<double>();
    model.cond_pos = value.at("cond_pos").get<std::map<std::string, double>>();
    model.cond_neg = value.at("cond_neg").get<std::map<std::string, double>>();
    model.vocab_size = value.at("vocab_size").get<std::size_t>();
    model.alpha = value.at("alpha").get<double>();
    model.lexicon_polarity = value.at("lexicon_polarity").get<double>();
    models[key] = std::move(model);
  }
  return models;
}

}  // namespace conceptsent
