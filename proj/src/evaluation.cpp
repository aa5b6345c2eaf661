#include "conceptsent/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include <json.hpp>

#include "conceptsent/errors.hpp"

namespace conceptsent {

MetricValues metrics(const ConfusionCounts& counts) {
  if (counts.total() == 0) throw InvariantError("metrics: all counts are zero");
  MetricValues values;
  if (counts.tp + counts.fp > 0) {
    values.precision = static_cast<double>(counts.tp) /
                       static_cast<double>(counts.tp + counts.fp);
  } else {
    values.precision_defined = false;
  }
  if (counts.tp + counts.fn > 0) {
    values.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  } else {
    values.recall_defined = false;
  }
  if (values.precision_defined && values.recall_defined &&
      values.precision + values.recall > 0.0) {
    values.f1 = 2.0 * values.recall * values.precision / (values.recall + values.precision);
  } else {
    values.f1_defined = false;
  }
  values.accuracy = static_cast<double>(counts.tp + counts.tn) /
                    static_cast<double>(counts.total());
  return values;
}

void seeded_shuffle(std::vector<std::size_t>& indices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = indices.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(indices[i - 1], indices[j]);
  }
}

std::vector<int> assign_folds(std::span<const AnnotatedSentence> sentences, std::size_t k,
                              std::uint64_t seed) {
  if (k < 2) throw SchemaError("fold count must be >= 2, got " + std::to_string(k));

  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    switch (sentences[i].sentence.label) {
      case Label::positive: positives.push_back(i); break;
      case Label::negative: negatives.push_back(i); break;
      case Label::neutral: break;
    }
  }
  if (positives.size() < k || negatives.size() < k) {
    throw SchemaError("need at least " + std::to_string(k) +
                      " sentences per class for " + std::to_string(k) + "-fold splitting");
  }
  seeded_shuffle(positives, seed);
  seeded_shuffle(negatives, seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<int> folds(sentences.size(), -1);
  for (std::size_t i = 0; i < positives.size(); ++i) folds[positives[i]] = static_cast<int>(i % k);
  for (std::size_t i = 0; i < negatives.size(); ++i) folds[negatives[i]] = static_cast<int>(i % k);
  return folds;
}

namespace {

MetricValues mean_metrics(const std::vector<FoldResult>& folds) {
  MetricValues mean;
  if (folds.empty()) return mean;
  for (const auto& fold : folds) {
    mean.precision += fold.values.precision;
    mean.recall += fold.values.recall;
    mean.f1 += fold.values.f1;
    mean.accuracy += fold.values.accuracy;
    mean.precision_defined = mean.precision_defined && fold.values.precision_defined;
    mean.recall_defined = mean.recall_defined && fold.values.recall_defined;
    mean.f1_defined = mean.f1_defined && fold.values.f1_defined;
  }
  const double n = static_cast<double>(folds.size());
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  mean.accuracy /= n;
  return mean;
}

std::string format_percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", fraction * 100.0);
  return buffer;
}

}  // namespace

EvalReport cross_validate(std::span<const AnnotatedSentence> sentences,
                          std::span<const FeatureMode> modes,
                          const SentimentResource& resource, const EdgeStore& edges,
                          const EmbeddingStore& embeddings, const PipelineParams& params,
                          std::size_t k, std::uint64_t seed) {
  const std::vector<int> folds = assign_folds(sentences, k, seed);

  EvalReport report;
  report.header =
      "Two-class polarity classification, stratified cross-validation. "
      "Scores depend entirely on the supplied corpus, sentiment lexicon, "
      "knowledge-graph edges, and embedding vectors; they are not comparable "
      "across different resource releases or concept extractors.";
  report.seed = seed;
  report.fold_count = k;
  for (const FeatureMode mode : modes) {
    report.configs.push_back(ConfigReport{mode, {}, {}});
  }

  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<AnnotatedSentence> train;
    std::vector<const AnnotatedSentence*> held_out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (folds[i] < 0) continue;
      if (static_cast<std::size_t>(folds[i]) == fold) {
        held_out.push_back(&sentences[i]);
      } else {
        train.push_back(sentences[i]);
      }
    }

    for (std::size_t m = 0; m < report.configs.size(); ++m) {
      const PipelineModel model =
          train_pipeline(train, resource, edges, embeddings, report.configs[m].mode, params);
      ConfusionCounts counts;
      for (const AnnotatedSentence* sentence : held_out) {
        const Label gold = sentence->sentence.label;
        const Label predicted = predict_sentence(model, resource, *sentence);
        if (gold == Label::positive) {
          (predicted == Label::positive ? counts.tp : counts.fn) += 1;
        } else {
          (predicted == Label::negative ? counts.tn : counts.fp) += 1;
        }
      }
      report.configs[m].folds.push_back(
          FoldResult{static_cast<int>(fold), counts, metrics(counts)});
    }
  }

  for (auto& config : report.configs) config.mean = mean_metrics(config.folds);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["header"] = report.header;
  doc["seed"] = report.seed;
  doc["folds"] = report.fold_count;
  doc["configs"] = nlohmann::json::array();
  for (const auto& config : report.configs) {
    nlohmann::json entry;
    entry["mode"] = to_string(config.mode);
    const auto values_json = [](const MetricValues& values) {
      nlohmann::json v;
      v["precision"] = format_percent(values.precision);
      v["recall"] = format_percent(values.recall);
      v["f1"] = format_percent(values.f1);
      v["accuracy"] = format_percent(values.accuracy);
      if (!values.precision_defined) v["precision_defined"] = false;
      if (!values.recall_defined) v["recall_defined"] = false;
      if (!values.f1_defined) v["f1_defined"] = false;
      return v;
    };
    entry["mean"] = values_json(config.mean);
    entry["folds"] = nlohmann::json::array();
    for (const auto& fold : config.folds) {
      nlohmann::json f;
      f["fold"] = fold.fold;
      f["tp"] = fold.counts.tp;
      f["tn"] = fold.counts.tn;
      f["fp"] = fold.counts.fp;
      f["fn"] = fold.counts.fn;
      f["metrics"] = values_json(fold.values);
      entry["folds"].push_back(std::move(f));
    }
    doc["configs"].push_back(std::move(entry));
  }
  return doc.dump(2);
}

std::string render_report_table(const EvalReport& report) {
  std::string out = report.header + "\n";
  out += "seed=" + std::to_string(report.seed) +
         " folds=" + std::to_string(report.fold_count) + "\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-24s %10s %10s %11s %10s\n", "configuration",
                "Precision", "Recall", "F-Measure", "Accuracy");
  out += line;
  out += std::string(69, '-') + "\n";
  for (const auto& config : report.configs) {
    std::snprintf(line, sizeof(line), "%-24s %10s %10s %11s %10s\n",
                  to_string(config.mode).c_str(), format_percent(config.mean.precision).c_str(),
                  format_percent(config.mean.recall).c_str(),
                  format_percent(config.mean.f1).c_str(),
                  format_percent(config.mean.accuracy).c_str());
    out += line;
  }
  return out;
}

}  // namespace conceptsent
