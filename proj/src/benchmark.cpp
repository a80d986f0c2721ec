#include "kalkan/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <utility>

#include "json.hpp"
#include "kalkan/errors.hpp"
#include "kalkan/featurizer.hpp"
#include "kalkan/grid_search.hpp"
#include "kalkan/persist.hpp"
#include "kalkan/random.hpp"

namespace kalkan {
namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<std::uint8_t> corpus_labels(const LabeledCorpus& corpus) {
  std::vector<std::uint8_t> y;
  y.reserve(corpus.docs.size());
  for (const LabeledDocument& doc : corpus.docs) y.push_back(doc.label);
  return y;
}

std::vector<std::string> corpus_texts(const LabeledCorpus& corpus) {
  std::vector<std::string> texts;
  texts.reserve(corpus.docs.size());
  for (const LabeledDocument& doc : corpus.docs) texts.push_back(doc.text);
  return texts;
}

json params_json(const ParamMap& params) {
  json out = json::object();
  for (const auto& [name, value] : params) {
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
      out[name] = *i;
    } else if (const auto* d = std::get_if<double>(&value)) {
      out[name] = *d;
    } else {
      out[name] = std::get<std::string>(value);
    }
  }
  return out;
}

std::string full_precision(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string short_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

}  // namespace

BenchmarkReport run_benchmark(const LabeledCorpus& corpus,
                              const NormalizerConfig& normalizer,
                              const BenchmarkConfig& cfg) {
  bool has_negative = false;
  bool has_positive = false;
  for (const LabeledDocument& doc : corpus.docs) {
    (doc.label ? has_positive : has_negative) = true;
  }
  if (!has_negative || !has_positive) {
    raise(ErrorKind::Stratification,
          "benchmark corpus must contain both labels");
  }

  SplitConfig split_cfg;
  split_cfg.test_fraction = cfg.test_fraction;
  split_cfg.seed = cfg.seed;
  const SplitResult split = stratified_split(corpus, split_cfg);

  const auto train_tokens =
      normalize_corpus(corpus_texts(split.train), normalizer);
  const auto test_tokens =
      normalize_corpus(corpus_texts(split.test), normalizer);

  VocabularyConfig vocab_cfg;
  vocab_cfg.min_df = cfg.min_df;
  Vocabulary vocab = build_vocabulary(train_tokens, vocab_cfg);
  if (vocab.size() == 0) {
    raise(ErrorKind::Data,
          "training vocabulary is empty after normalization and min_df");
  }
  IdfModel idf = fit_idf(vocab);
  const std::string fingerprint = vocabulary_fingerprint(vocab, idf);

  auto space = std::make_shared<FeatureSpace>();
  space->vocabulary = std::move(vocab);
  space->idf = std::move(idf);
  space->fingerprint = fingerprint;

  SparseMatrix train_x =
      vectorize_corpus(space->vocabulary, space->idf, train_tokens);
  SparseMatrix test_x =
      vectorize_corpus(space->vocabulary, space->idf, test_tokens);
  train_x.fingerprint = fingerprint;
  test_x.fingerprint = fingerprint;
  const std::vector<std::uint8_t> train_y = corpus_labels(split.train);
  const std::vector<std::uint8_t> test_y = corpus_labels(split.test);

  BenchmarkReport report;
  report.corpus = corpus.provenance;
  report.seed = cfg.seed;
  report.test_fraction = cfg.test_fraction;
  report.n_train = train_y.size();
  report.n_test = test_y.size();
  report.vocabulary_size = space->vocabulary.size();
  report.fingerprint = fingerprint;

  std::vector<std::shared_ptr<const TrainedModel>> members;
  members.reserve(kNumModelKinds - 1);

  const auto evaluate = [&](const TrainedModel& model, double wall) {
    BenchmarkRow row;
    row.kind = model.spec.kind;
    row.spec = model.spec;
    row.confusion = confusion_matrix(test_y, predict_labels(model, test_x));
    row.metrics = summarize_metrics(row.confusion);
    row.wall_seconds = wall;
    report.rows.push_back(std::move(row));
  };

  for (ModelKind kind : all_model_kinds()) {
    if (kind == ModelKind::voting) continue;
    const std::uint64_t model_seed =
        mix_seed(cfg.seed, static_cast<std::uint64_t>(kind));
    const auto start = std::chrono::steady_clock::now();
    ClassifierSpec spec = default_spec(kind);
    if (cfg.grid_search) {
      spec = grid_search(kind, default_grid(kind), train_x, train_y, cfg.folds,
                         model_seed)
                 .best;
    }
    auto model = std::make_shared<const TrainedModel>(
        fit_model(spec, train_x, train_y, model_seed, space));
    evaluate(*model, seconds_since(start));
    members.push_back(std::move(model));
  }

  {
    const auto start = std::chrono::steady_clock::now();
    const TrainedModel voting = fit_voting_from_members(
        std::move(members), cfg.seed, train_y.size(), space);
    evaluate(voting, seconds_since(start));
  }

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const BenchmarkRow& a, const BenchmarkRow& b) {
                     return a.metrics.f1_pos > b.metrics.f1_pos;
                   });
  return report;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "md") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  raise(ErrorKind::Parameter, "unknown report format: " + name);
}

std::string render_report(const BenchmarkReport& report, ReportFormat format) {
  if (format == ReportFormat::markdown) {
    std::string out;
    out += "# Benchmark\n\n";
    out += "- corpus: " + report.corpus + "\n";
    out += "- seed: " + std::to_string(report.seed) + "\n";
    out += "- test fraction: " + short_real(report.test_fraction) + "\n";
    out += "- train/test rows: " + std::to_string(report.n_train) + "/" +
           std::to_string(report.n_test) + "\n";
    out += "- vocabulary: " + std::to_string(report.vocabulary_size) +
           " terms\n";
    out += "- vocabulary fingerprint: " + report.fingerprint + "\n";
    out += "\n## Confusion counts\n\n";
    out += "| Model | TP | FN | FP | TN |\n";
    out += "|---|---:|---:|---:|---:|\n";
    for (const BenchmarkRow& row : report.rows) {
      out += "| " + to_string(row.kind) + " | " + std::to_string(row.confusion.tp) +
             " | " + std::to_string(row.confusion.fn) + " | " +
             std::to_string(row.confusion.fp) + " | " +
             std::to_string(row.confusion.tn) + " |\n";
    }
    out += "\n## Metrics (x100)\n\n";
    out += "| Model | F1 | Accuracy | Precision | Recall |\n";
    out += "|---|---:|---:|---:|---:|\n";
    for (const BenchmarkRow& row : report.rows) {
      out += "| " + to_string(row.kind) + " | " +
             format_metric_percent(row.metrics.f1_pos) + " | " +
             format_metric_percent(row.metrics.accuracy) + " | " +
             format_metric_percent(row.metrics.macro_precision) + " | " +
             format_metric_percent(row.metrics.macro_recall) + " |\n";
    }
    return out;
  }

  if (format == ReportFormat::csv) {
    std::string out =
        "model,tp,fn,fp,tn,accuracy,precision_pos,recall_pos,f1_pos,"
        "macro_precision,macro_recall\n";
    for (const BenchmarkRow& row : report.rows) {
      out += to_string(row.kind) + "," + std::to_string(row.confusion.tp) +
             "," + std::to_string(row.confusion.fn) + "," +
             std::to_string(row.confusion.fp) + "," +
             std::to_string(row.confusion.tn) + "," +
             full_precision(row.metrics.accuracy) + "," +
             full_precision(row.metrics.precision_pos) + "," +
             full_precision(row.metrics.recall_pos) + "," +
             full_precision(row.metrics.f1_pos) + "," +
             full_precision(row.metrics.macro_precision) + "," +
             full_precision(row.metrics.macro_recall) + "\n";
    }
    return out;
  }

  json rows = json::array();
  for (const BenchmarkRow& row : report.rows) {
    rows.push_back(
        json{{"kind", to_string(row.kind)},
             {"hyperparameters", params_json(row.spec.params)},
             {"confusion",
              json{{"tp", row.confusion.tp},
                   {"fn", row.confusion.fn},
                   {"fp", row.confusion.fp},
                   {"tn", row.confusion.tn}}},
             {"metrics",
              json{{"accuracy", row.metrics.accuracy},
                   {"precision_pos", row.metrics.precision_pos},
                   {"recall_pos", row.metrics.recall_pos},
                   {"f1_pos", row.metrics.f1_pos},
                   {"macro_precision", row.metrics.macro_precision},
                   {"macro_recall", row.metrics.macro_recall}}}});
  }
  const json doc{{"corpus", report.corpus},
                 {"seed", report.seed},
                 {"test_fraction", report.test_fraction},
                 {"n_train", report.n_train},
                 {"n_test", report.n_test},
                 {"vocabulary_size", report.vocabulary_size},
                 {"fingerprint", report.fingerprint},
                 {"rows", rows}};
  return canonical_dump(doc) + "\n";
}

}  // namespace kalkan
