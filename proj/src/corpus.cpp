#include "conceptsent/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "conceptsent/errors.hpp"

namespace conceptsent {

namespace {

using nlohmann::json;

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_alnum(char c) { return is_ascii_letter(c) || (c >= '0' && c <= '9'); }

char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Irregular forms plus identity guards for words the suffix rules would
// mangle (nothing, hundred, ...).
const std::unordered_map<std::string_view, std::string_view>& irregular_lemmas() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      {"am", "be"},       {"is", "be"},        {"are", "be"},
      {"was", "be"},      {"were", "be"},      {"been", "be"},
      {"being", "be"},    {"bought", "buy"},   {"brought", "bring"},
      {"thought", "think"}, {"went", "go"},    {"gone", "go"},
      {"did", "do"},      {"done", "do"},      {"doing", "do"},
      {"had", "have"},    {"has", "have"},     {"made", "make"},
      {"making", "make"}, {"said", "say"},     {"told", "tell"},
      {"got", "get"},     {"gotten", "get"},   {"took", "take"},
      {"taken", "take"},  {"taking", "take"},  {"came", "come"},
      {"coming", "come"}, {"saw", "see"},      {"seen", "see"},
      {"seeing", "see"},  {"knew", "know"},    {"known", "know"},
      {"gave", "give"},   {"given", "give"},   {"giving", "give"},
      {"found", "find"},  {"felt", "feel"},    {"kept", "keep"},
      {"left", "leave"},  {"lost", "lose"},    {"met", "meet"},
      {"paid", "pay"},    {"sent", "send"},    {"spent", "spend"},
      {"built", "build"}, {"broke", "break"},  {"broken", "break"},
      {"chose", "choose"}, {"chosen", "choose"}, {"drove", "drive"},
      {"driven", "drive"}, {"ate", "eat"},     {"eaten", "eat"},
      {"fell", "fall"},   {"fallen", "fall"},  {"heard", "hear"},
      {"held", "hold"},   {"ran", "run"},      {"sold", "sell"},
      {"spoke", "speak"}, {"spoken", "speak"}, {"stood", "stand"},
      {"understood", "understand"}, {"wore", "wear"}, {"worn", "wear"},
      {"wrote", "write"}, {"written", "write"}, {"sat", "sit"},
      {"slept", "sleep"}, {"won", "win"},      {"began", "begin"},
      {"begun", "begin"}, {"used", "use"},     {"using", "use"},
      {"added", "add"},   {"adding", "add"},   {"focused", "focus"},
      {"focusing", "focus"}, {"children", "child"}, {"men", "man"},
      {"women", "woman"}, {"feet", "foot"},    {"teeth", "tooth"},
      {"mice", "mouse"},  {"series", "series"}, {"nothing", "nothing"},
      {"something", "something"}, {"anything", "anything"},
      {"everything", "everything"}, {"thing", "thing"},
      {"morning", "morning"}, {"evening", "evening"}, {"during", "during"},
      {"hundred", "hundred"}, {"thousand", "thousand"}, {"tired", "tired"},
  };
  return table;
}

// One rewrite step of the suffix rules; lemmatize() iterates to a fixpoint.
std::string lemma_step(const std::string& token) {
  const auto& irregular = irregular_lemmas();
  if (auto it = irregular.find(token); it != irregular.end()) {
    return std::string(it->second);
  }
  const std::size_t n = token.size();
  if (n < 4) return token;

  if (ends_with(token, "ies") && n - 2 >= 3) {
    return token.substr(0, n - 3) + "y";
  }
  if (ends_with(token, "sses") || ends_with(token, "xes") || ends_with(token, "zes") ||
      ends_with(token, "ches") || ends_with(token, "shes")) {
    return token.substr(0, n - 2);
  }
  if (!ends_with(token, "ss") && !ends_with(token, "us") && !ends_with(token, "is") &&
      ends_with(token, "s") && n - 1 >= 3) {
    return token.substr(0, n - 1);
  }

  const auto repair = [](std::string stem) {
    // Undo consonant doubling (runn -> run); ss/ll/ff/zz are legitimate.
    static constexpr std::string_view doubling = "bdgmnprt";
    const std::size_t m = stem.size();
    if (m >= 3 && stem[m - 1] == stem[m - 2] &&
        doubling.find(stem[m - 1]) != std::string_view::npos) {
      stem.pop_back();
    }
    // Restore a dropped final e (discharg -> discharge, sav -> save).
    static constexpr std::string_view e_finals = "cgvzu";
    const char last = stem.back();
    if (e_finals.find(last) != std::string_view::npos ||
        (last == 's' && !(stem.size() >= 2 && stem[stem.size() - 2] == 's'))) {
      stem += 'e';
    }
    return stem;
  };

  if (ends_with(token, "ing") && !ends_with(token, "eing") && n - 3 >= 3) {
    return repair(token.substr(0, n - 3));
  }
  if (ends_with(token, "ed") && !ends_with(token, "eed") && n - 2 >= 3) {
    return repair(token.substr(0, n - 2));
  }
  return token;
}

json parse_json_line(const std::string& line, std::size_t line_number) {
  json value = json::parse(line, nullptr, false);
  if (value.is_discarded() || !value.is_object()) {
    throw SchemaError("line " + std::to_string(line_number) + ": not a JSON object");
  }
  return value;
}

std::string require_string(const json& object, const char* key, std::size_t line_number) {
  if (!object.contains(key) || !object[key].is_string()) {
    throw SchemaError("line " + std::to_string(line_number) + ": missing string field \"" +
                      key + "\"");
  }
  return object[key].get<std::string>();
}

Sentence sentence_from_json(const json& record, std::size_t line_number,
                            const PreprocessOptions& options) {
  const std::string id = require_string(record, "id", line_number);
  const std::string text = require_string(record, "text", line_number);
  Label label;
  try {
    label = parse_label(require_string(record, "label", line_number));
  } catch (const SchemaError& e) {
    throw SchemaError("line " + std::to_string(line_number) + ": " + e.what());
  }
  std::optional<double> score;
  if (record.contains("score")) {
    if (!record["score"].is_number()) {
      throw SchemaError("line " + std::to_string(line_number) + ": \"score\" is not a number");
    }
    score = record["score"].get<double>();
  }

  if (record.contains("tokens")) {
    // Preprocessed form: trust the stored analysis.
    Sentence s;
    s.id = id;
    s.raw_text = text;
    s.label = label;
    s.score = score.value_or(label == Label::positive  ? 1.0
                             : label == Label::negative ? -1.0
                                                        : 0.0);
    s.tokens = record["tokens"].get<std::vector<std::string>>();
    if (!record.contains("lemmas")) {
      throw SchemaError("line " + std::to_string(line_number) + ": \"tokens\" without \"lemmas\"");
    }
    s.lemmas = record["lemmas"].get<std::vector<std::string>>();
    if (s.tokens.size() != s.lemmas.size()) {
      throw SchemaError("line " + std::to_string(line_number) + ": token/lemma length mismatch");
    }
    s.has_negation = record.value("has_negation", false);
    return s;
  }

  try {
    return make_sentence(id, text, label, score, options);
  } catch (const SchemaError& e) {
    throw SchemaError("line " + std::to_string(line_number) + ": " + e.what());
  }
}

}  // namespace

std::string to_string(Label label) {
  switch (label) {
    case Label::positive: return "positive";
    case Label::negative: return "negative";
    case Label::neutral: return "neutral";
  }
  throw InvariantError("unreachable label value");
}

Label parse_label(std::string_view text) {
  if (text == "positive") return Label::positive;
  if (text == "negative") return Label::negative;
  if (text == "neutral") return Label::neutral;
  throw SchemaError("unknown label value \"" + std::string(text) + "\"");
}

const AbbreviationTable& default_abbreviations() {
  static const AbbreviationTable table = {
      {"aint", "is not"},       {"asap", "as soon as possible"},
      {"bc", "because"},        {"btw", "by the way"},
      {"cant", "cannot"},       {"couldnt", "could not"},
      {"coz", "because"},       {"cuz", "because"},
      {"didnt", "did not"},     {"doesnt", "does not"},
      {"dont", "do not"},       {"fyi", "for your information"},
      {"gonna", "going to"},    {"gotta", "got to"},
      {"idk", "i do not know"}, {"imho", "in my opinion"},
      {"imo", "in my opinion"}, {"isnt", "is not"},
      {"kinda", "kind of"},     {"msg", "message"},
      {"pls", "please"},        {"plz", "please"},
      {"ppl", "people"},        {"shouldnt", "should not"},
      {"sorta", "sort of"},     {"thru", "through"},
      {"thx", "thanks"},        {"ur", "your"},
      {"wanna", "want to"},     {"wasnt", "was not"},
      {"wont", "will not"},     {"wouldnt", "would not"},
  };
  return table;
}

const std::unordered_set<std::string>& default_negation_markers() {
  static const std::unordered_set<std::string> markers = {
      "not",    "no",      "never",    "neither", "nor",
      "none",   "nobody",  "nothing",  "nowhere", "cannot",
      "without", "hardly", "rarely",   "scarcely", "seldom",
  };
  return markers;
}

std::string normalize_text(std::string_view raw, const AbbreviationTable& abbreviations) {
  // Lowercase and separate punctuation; apostrophes between alphanumerics
  // stay inside the token (doesn't, you'd).
  std::string separated;
  separated.reserve(raw.size() + raw.size() / 4);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = to_lower_ascii(raw[i]);
    if (is_ascii_alnum(c)) {
      separated += c;
    } else if (c == '\'' && i > 0 && i + 1 < raw.size() && is_ascii_alnum(raw[i - 1]) &&
               is_ascii_alnum(raw[i + 1])) {
      separated += c;
    } else if (static_cast<unsigned char>(c) >= 0x80) {
      separated += c;  // pass non-ASCII bytes through untouched
    } else {
      separated += ' ';
      if (!std::isspace(static_cast<unsigned char>(c))) separated += c;
      separated += ' ';
    }
  }

  // Squeeze letter runs of length >= 3 down to 2 (soooo -> soo).
  std::string squeezed;
  squeezed.reserve(separated.size());
  for (char c : separated) {
    const std::size_t m = squeezed.size();
    if (is_ascii_letter(c) && m >= 2 && squeezed[m - 1] == c && squeezed[m - 2] == c) {
      continue;
    }
    squeezed += c;
  }

  // Whole-word abbreviation expansion.
  std::string expanded;
  expanded.reserve(squeezed.size());
  std::size_t pos = 0;
  while (pos < squeezed.size()) {
    if (squeezed[pos] == ' ') {
      expanded += ' ';
      ++pos;
      continue;
    }
    std::size_t end = squeezed.find(' ', pos);
    if (end == std::string::npos) end = squeezed.size();
    const std::string word = squeezed.substr(pos, end - pos);
    if (auto it = abbreviations.find(word); it != abbreviations.end()) {
      expanded += it->second;
    } else {
      expanded += word;
    }
    pos = end;
  }
  return expanded;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() &&
           std::isspace(static_cast<unsigned char>(normalized[pos]))) {
      ++pos;
    }
    std::size_t end = pos;
    while (end < normalized.size() &&
           !std::isspace(static_cast<unsigned char>(normalized[end]))) {
      ++end;
    }
    if (end > pos) {
      std::string token(normalized.substr(pos, end - pos));
      if (std::any_of(token.begin(), token.end(), is_ascii_alnum)) {
        tokens.push_back(std::move(token));
      }
    }
    pos = end;
  }
  return tokens;
}

std::string lemmatize(std::string_view token) {
  std::string current(token);
  for (int round = 0; round < 8; ++round) {
    std::string next = lemma_step(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

bool detect_negation(std::span<const std::string> tokens,
                     const std::unordered_set<std::string>& markers) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
    return markers.contains(t) || (t.size() > 3 && ends_with(t, "n't"));
  });
}

bool detect_negation(std::span<const std::string> tokens) {
  return detect_negation(tokens, default_negation_markers());
}

Sentence make_sentence(std::string id, std::string text, Label label,
                       std::optional<double> score, const PreprocessOptions& options) {
  Sentence s;
  s.id = std::move(id);
  s.raw_text = std::move(text);
  s.label = label;
  if (score) {
    if (*score < -1.0 || *score > 1.0) {
      throw SchemaError("score " + std::to_string(*score) + " outside [-1,1]");
    }
    const bool sign_ok = (label == Label::positive && *score > 0.0) ||
                         (label == Label::negative && *score < 0.0) ||
                         (label == Label::neutral && *score == 0.0);
    if (!sign_ok) {
      throw SchemaError("score " + std::to_string(*score) + " disagrees with label \"" +
                        to_string(label) + "\"");
    }
    s.score = *score;
  } else {
    s.score = label == Label::positive ? 1.0 : label == Label::negative ? -1.0 : 0.0;
  }
  s.tokens = tokenize(normalize_text(s.raw_text, *options.abbreviations));
  s.lemmas.reserve(s.tokens.size());
  for (const auto& token : s.tokens) s.lemmas.push_back(lemmatize(token));
  s.has_negation = detect_negation(s.tokens, *options.negation_markers);
  return s;
}

std::vector<Sentence> load_corpus(const std::filesystem::path& path,
                                  const PreprocessOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  std::vector<Sentence> sentences;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const json record = parse_json_line(line, line_number);
    if (record.contains("tokens")) {
      throw SchemaError("line " + std::to_string(line_number) +
                        ": preprocessed record in raw corpus (use load_sentences)");
    }
    sentences.push_back(sentence_from_json(record, line_number, options));
  }
  return sentences;
}

std::string to_record_json(const Sentence& sentence) {
  json record;
  record["id"] = sentence.id;
  record["text"] = sentence.raw_text;
  record["label"] = to_string(sentence.label);
  record["score"] = sentence.score;
  return record.dump();
}

Sentence from_record_json(std::string_view json_text, const PreprocessOptions& options) {
  const json record = parse_json_line(std::string(json_text), 1);
  return sentence_from_json(record, 1, options);
}

std::string to_sentence_json(const Sentence& sentence) {
  json record;
  record["id"] = sentence.id;
  record["text"] = sentence.raw_text;
  record["label"] = to_string(sentence.label);
  record["score"] = sentence.score;
  record["tokens"] = sentence.tokens;
  record["lemmas"] = sentence.lemmas;
  record["has_negation"] = sentence.has_negation;
  return record.dump();
}

void save_sentences(const std::filesystem::path& path, std::span<const Sentence> sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  for (const auto& sentence : sentences) {
    out << to_sentence_json(sentence) << '\n';
  }
}

std::vector<Sentence> load_sentences(const std::filesystem::path& path,
                                     const PreprocessOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  std::vector<Sentence> sentences;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    sentences.push_back(sentence_from_json(parse_json_line(line, line_number),
                                           line_number, options));
  }
  return sentences;
}

AbbreviationTable load_abbreviations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open abbreviation table: " + path.string());
  AbbreviationTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw SchemaError("line " + std::to_string(line_number) +
                        ": expected short<TAB>expansion in " + path.string());
    }
    table[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return table;
}

std::unordered_set<std::string> load_negation_markers(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open negation-marker list: " + path.string());
  std::unordered_set<std::string> markers;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    markers.insert(line);
  }
  return markers;
}

}  // namespace conceptsent
