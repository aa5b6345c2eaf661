#include "conceptsent/lexicon.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "conceptsent/concepts.hpp"
#include "conceptsent/errors.hpp"

namespace conceptsent {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      return parts;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

SentimentResource build_resource(const std::filesystem::path& lexicon_path) {
  std::ifstream in(lexicon_path);
  if (!in) throw IoError("cannot open lexicon file: " + lexicon_path.string());

  struct Row {
    std::string concept_key;
    double polarity;
    std::vector<std::string> equivalents;
    std::size_t line;
  };
  std::vector<Row> rows;

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw SchemaError("lexicon row " + std::to_string(line_number) +
                        ": expected concept<TAB>polarity[<TAB>equivalents]");
    }
    Row row;
    row.concept_key = normalize_key(fields[0]);
    if (row.concept_key.empty()) {
      throw SchemaError("lexicon row " + std::to_string(line_number) + ": empty concept key");
    }
    try {
      std::size_t consumed = 0;
      row.polarity = std::stod(fields[1], &consumed);
      if (consumed != fields[1].size()) throw std::invalid_argument(fields[1]);
    } catch (const std::exception&) {
      throw SchemaError("lexicon row " + std::to_string(line_number) +
                        ": polarity \"" + fields[1] + "\" is not a number");
    }
    if (row.polarity < -1.0 || row.polarity > 1.0 || std::isnan(row.polarity)) {
      throw SchemaError("lexicon row " + std::to_string(line_number) + " (\"" + row.concept_key +
                        "\"): polarity " + fields[1] + " outside [-1,1]");
    }
    if (fields.size() == 3 && !fields[2].empty()) {
      for (const auto& equivalent : split(fields[2], '|')) {
        std::string key = normalize_key(equivalent);
        if (!key.empty()) row.equivalents.push_back(std::move(key));
      }
    }
    if (row.polarity == 0.0) continue;  // non-sentiment row
    row.line = line_number;
    rows.push_back(std::move(row));
  }

  SentimentResource resource;
  for (const auto& row : rows) {
    auto [it, inserted] = resource.try_emplace(
        row.concept_key, SentimentEntry{row.concept_key, row.polarity, row.equivalents});
    if (!inserted && it->second.polarity_value != row.polarity) {
      throw SchemaError("lexicon row " + std::to_string(row.line) + ": concept \"" +
                        row.concept_key + "\" already defined with polarity " +
                        std::to_string(it->second.polarity_value));
    }
  }
  // Equivalents inherit the parent's signed value; an own row always wins.
  // Between competing parents, the first row in file order wins.
  for (const auto& row : rows) {
    for (const auto& equivalent : row.equivalents) {
      resource.try_emplace(equivalent, SentimentEntry{equivalent, row.polarity, {}});
    }
  }
  return resource;
}

void save_resource(const std::filesystem::path& path, const SentimentResource& resource) {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [key, entry] : resource) {
    nlohmann::json value;
    value["polarity_value"] = entry.polarity_value;
    if (!entry.equivalents.empty()) value["equivalents"] = entry.equivalents;
    entries[key] = std::move(value);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << entries.dump(2) << '\n';
}

SentimentResource load_resource(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open resource file: " + path.string());
  nlohmann::json entries = nlohmann::json::parse(in, nullptr, false);
  if (entries.is_discarded() || !entries.is_object()) {
    throw SchemaError("resource file is not a JSON object: " + path.string());
  }
  SentimentResource resource;
  for (const auto& [key, value] : entries.items()) {
    SentimentEntry entry;
    entry.concept_key = key;
    entry.polarity_value = value.at("polarity_value").get<double>();
    if (entry.polarity_value == 0.0 || entry.polarity_value < -1.0 ||
        entry.polarity_value > 1.0) {
      throw SchemaError("resource entry \"" + key + "\" has invalid polarity");
    }
    if (value.contains("equivalents")) {
      entry.equivalents = value["equivalents"].get<std::vector<std::string>>();
    }
    resource.emplace(key, std::move(entry));
  }
  return resource;
}

}  // namespace conceptsent
