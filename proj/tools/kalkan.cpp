// Command-line front end: stats, preprocess, train, evaluate, benchmark,
// predict, paper-check. Exit 0 on success, 1 on usage errors, 2 on data or
// model errors. Diagnostics go to stderr; results go to stdout or --out.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kalkan/benchmark.hpp"
#include "kalkan/corpus.hpp"
#include "kalkan/errors.hpp"
#include "kalkan/eval.hpp"
#include "kalkan/featurizer.hpp"
#include "kalkan/grid_search.hpp"
#include "kalkan/model.hpp"
#include "kalkan/normalizer.hpp"
#include "kalkan/paper_tables.hpp"
#include "kalkan/persist.hpp"
#include "kalkan/random.hpp"

namespace {

using kalkan::ErrorKind;
using kalkan::raise;
using nlohmann::json;

struct CliConfig {
  std::string input;
  std::string text_col = "message";
  std::string label_col = "cyberbullying";
  std::uint64_t seed = 42;
  double test_fraction = 0.3;
  std::uint32_t min_df = 2;
  std::string model;  // kind name for train, model file for evaluate/predict
  bool grid_search = false;
  std::string stopwords;
  std::string lexicon;
  std::string out;
  std::string format = "md";
};

// Bundled asset lookup: explicit flag, then ./assets, then the source tree.
std::string resolve_asset(const std::string& explicit_path,
                          const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  const std::string local = "assets/" + name;
  if (std::filesystem::exists(local)) return local;
#ifdef KALKAN_SOURCE_ROOT
  return std::string(KALKAN_SOURCE_ROOT) + "/assets/" + name;
#else
  return local;
#endif
}

kalkan::NormalizerConfig make_normalizer(const CliConfig& cfg) {
  return kalkan::load_normalizer_config(
      resolve_asset(cfg.stopwords, "stopwords_tr.txt"),
      resolve_asset(cfg.lexicon, "slang_tr.tsv"));
}

kalkan::LabeledCorpus load_input(const CliConfig& cfg) {
  if (cfg.input.empty()) {
    raise(ErrorKind::Asset, "no --input file given");
  }
  kalkan::CsvSchema schema;
  schema.text_col = cfg.text_col;
  schema.label_col = cfg.label_col;
  return kalkan::load_corpus(cfg.input, schema);
}

void emit(const CliConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) raise(ErrorKind::Asset, "cannot open output file: " + cfg.out);
  file << text;
  if (!file) raise(ErrorKind::Asset, "cannot write output file: " + cfg.out);
}

std::string histogram_markdown(const std::string& title,
                               const kalkan::Histogram& h) {
  std::string out = "\n### " + title + "\n\n";
  out += "| Bin start | Width | Negative | Positive |\n";
  out += "|---:|---:|---:|---:|\n";
  for (std::size_t i = 0; i < h.bins.size(); ++i) {
    char start[64];
    std::snprintf(start, sizeof start, "%g", h.origin + h.bin_width * i);
    char width[64];
    std::snprintf(width, sizeof width, "%g", h.bin_width);
    out += std::string("| ") + start + " | " + width + " | " +
           std::to_string(h.bins[i][0]) + " | " + std::to_string(h.bins[i][1]) +
           " |\n";
  }
  return out;
}

json histogram_json(const kalkan::Histogram& h) {
  json bins = json::array();
  for (const auto& b : h.bins) bins.push_back(json::array({b[0], b[1]}));
  return json{{"origin", h.origin}, {"bin_width", h.bin_width}, {"bins", bins}};
}

std::string full_precision(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string render_stats(const kalkan::EdaReport& r,
                         kalkan::ReportFormat format) {
  if (format == kalkan::ReportFormat::json) {
    const json doc{
        {"n_documents", r.n_documents},
        {"label_counts", json::array({r.label_counts[0], r.label_counts[1]})},
        {"mean_chars", json::array({r.mean_chars[0], r.mean_chars[1]})},
        {"mean_words", json::array({r.mean_words[0], r.mean_words[1]})},
        {"mean_word_length",
         json::array({r.mean_word_length[0], r.mean_word_length[1]})},
        {"char_counts", histogram_json(r.char_counts)},
        {"word_counts", histogram_json(r.word_counts)},
        {"word_lengths", histogram_json(r.word_lengths)}};
    return kalkan::canonical_dump(doc) + "\n";
  }
  if (format == kalkan::ReportFormat::csv) {
    std::string out = "label,documents,mean_chars,mean_words,mean_word_length\n";
    for (int label = 0; label < 2; ++label) {
      out += std::to_string(label) + "," +
             std::to_string(r.label_counts[label]) + "," +
             full_precision(r.mean_chars[label]) + "," +
             full_precision(r.mean_words[label]) + "," +
             full_precision(r.mean_word_length[label]) + "\n";
    }
    return out;
  }
  std::string out = "# Corpus statistics\n\n";
  out += "- documents: " + std::to_string(r.n_documents) + "\n";
  out += "- labels: " + std::to_string(r.label_counts[0]) + " negative, " +
         std::to_string(r.label_counts[1]) + " positive\n";
  out += "\n| Per label | Negative | Positive |\n|---|---:|---:|\n";
  char buf[64];
  const auto cell = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  out += "| mean characters | " + cell(r.mean_chars[0]) + " | " +
         cell(r.mean_chars[1]) + " |\n";
  out += "| mean words | " + cell(r.mean_words[0]) + " | " +
         cell(r.mean_words[1]) + " |\n";
  out += "| mean word length | " + cell(r.mean_word_length[0]) + " | " +
         cell(r.mean_word_length[1]) + " |\n";
  out += histogram_markdown("Characters per message", r.char_counts);
  out += histogram_markdown("Words per message", r.word_counts);
  out += histogram_markdown("Mean word length per message", r.word_lengths);
  return out;
}

std::string render_eval(const kalkan::ConfusionMatrix& cm,
                        const kalkan::EvalReport& m,
                        kalkan::ReportFormat format) {
  if (format == kalkan::ReportFormat::json) {
    const json doc{{"confusion",
                    json{{"tp", cm.tp}, {"fn", cm.fn}, {"fp", cm.fp}, {"tn", cm.tn}}},
                   {"metrics",
                    json{{"accuracy", m.accuracy},
                         {"precision_pos", m.precision_pos},
                         {"recall_pos", m.recall_pos},
                         {"f1_pos", m.f1_pos},
                         {"macro_precision", m.macro_precision},
                         {"macro_recall", m.macro_recall}}}};
    return kalkan::canonical_dump(doc) + "\n";
  }
  if (format == kalkan::ReportFormat::csv) {
    std::string out =
        "tp,fn,fp,tn,accuracy,precision_pos,recall_pos,f1_pos,"
        "macro_precision,macro_recall\n";
    out += std::to_string(cm.tp) + "," + std::to_string(cm.fn) + "," +
           std::to_string(cm.fp) + "," + std::to_string(cm.tn) + "," +
           full_precision(m.accuracy) + "," + full_precision(m.precision_pos) +
           "," + full_precision(m.recall_pos) + "," + full_precision(m.f1_pos) +
           "," + full_precision(m.macro_precision) + "," +
           full_precision(m.macro_recall) + "\n";
    return out;
  }
  std::string out = "# Evaluation\n\n";
  out += "| TP | FN | FP | TN |\n|---:|---:|---:|---:|\n";
  out += "| " + std::to_string(cm.tp) + " | " + std::to_string(cm.fn) + " | " +
         std::to_string(cm.fp) + " | " + std::to_string(cm.tn) + " |\n";
  out += "\n| Metric | x100 |\n|---|---:|\n";
  out += "| F1 | " + kalkan::format_metric_percent(m.f1_pos) + " |\n";
  out += "| Accuracy | " + kalkan::format_metric_percent(m.accuracy) + " |\n";
  out += "| Precision | " + kalkan::format_metric_percent(m.macro_precision) +
         " |\n";
  out += "| Recall | " + kalkan::format_metric_percent(m.macro_recall) + " |\n";
  return out;
}

// Featurizes raw texts against a fitted model's stored vocabulary.
kalkan::SparseMatrix vectorize_against(const kalkan::TrainedModel& model,
                                       const std::vector<std::string>& texts,
                                       const kalkan::NormalizerConfig& norm) {
  if (!model.space || model.space->vocabulary.size() == 0) {
    raise(ErrorKind::Compatibility,
          "model file carries no vocabulary; cannot featurize raw text");
  }
  const auto tokens = kalkan::normalize_corpus(texts, norm);
  kalkan::SparseMatrix x = kalkan::vectorize_corpus(model.space->vocabulary,
                                                    model.space->idf, tokens);
  x.fingerprint = model.space->fingerprint;
  return x;
}

int run_stats(const CliConfig& cfg) {
  const kalkan::LabeledCorpus corpus = load_input(cfg);
  emit(cfg, render_stats(kalkan::corpus_stats(corpus),
                         kalkan::parse_report_format(cfg.format)));
  return 0;
}

int run_preprocess(const CliConfig& cfg) {
  const kalkan::LabeledCorpus corpus = load_input(cfg);
  const kalkan::NormalizerConfig norm = make_normalizer(cfg);
  std::vector<std::string> texts;
  texts.reserve(corpus.docs.size());
  for (const auto& doc : corpus.docs) texts.push_back(doc.text);
  const auto tokens = kalkan::normalize_corpus(texts, norm);
  std::string out;
  for (const auto& doc_tokens : tokens) {
    for (std::size_t i = 0; i < doc_tokens.size(); ++i) {
      if (i) out += ' ';
      out += doc_tokens[i];
    }
    out += '\n';
  }
  emit(cfg, out);
  return 0;
}

int run_train(const CliConfig& cfg) {
  if (cfg.model.empty()) {
    std::cerr << "train requires --model <kind>\n";
    return 1;
  }
  if (cfg.out.empty()) {
    std::cerr << "train requires --out <model file>\n";
    return 1;
  }
  const kalkan::ModelKind kind = kalkan::parse_model_kind(cfg.model);
  const kalkan::LabeledCorpus corpus = load_input(cfg);
  const kalkan::NormalizerConfig norm = make_normalizer(cfg);

  std::vector<std::string> texts;
  std::vector<std::uint8_t> y;
  texts.reserve(corpus.docs.size());
  y.reserve(corpus.docs.size());
  for (const auto& doc : corpus.docs) {
    texts.push_back(doc.text);
    y.push_back(doc.label);
  }
  const auto tokens = kalkan::normalize_corpus(texts, norm);
  kalkan::VocabularyConfig vocab_cfg;
  vocab_cfg.min_df = cfg.min_df;
  kalkan::Vocabulary vocab = kalkan::build_vocabulary(tokens, vocab_cfg);
  if (vocab.size() == 0) {
    raise(ErrorKind::Data,
          "training vocabulary is empty after normalization and min_df");
  }
  kalkan::IdfModel idf = kalkan::fit_idf(vocab);
  auto space = std::make_shared<kalkan::FeatureSpace>();
  space->fingerprint = kalkan::vocabulary_fingerprint(vocab, idf);
  space->vocabulary = std::move(vocab);
  space->idf = std::move(idf);

  kalkan::SparseMatrix x =
      kalkan::vectorize_corpus(space->vocabulary, space->idf, tokens);
  x.fingerprint = space->fingerprint;

  kalkan::ClassifierSpec spec = kalkan::default_spec(kind);
  if (cfg.grid_search) {
    spec = kalkan::grid_search(kind, kalkan::default_grid(kind), x, y, 5,
                               cfg.seed)
               .best;
  }
  const kalkan::TrainedModel model =
      kalkan::fit_model(spec, x, y, cfg.seed, space);
  kalkan::save_model(model, cfg.out);
  std::cerr << "saved " << kalkan::to_string(kind) << " fitted on "
            << y.size() << " rows to " << cfg.out << "\n";
  return 0;
}

int run_evaluate(const CliConfig& cfg) {
  if (cfg.model.empty()) {
    std::cerr << "evaluate requires --model <model file>\n";
    return 1;
  }
  const kalkan::TrainedModel model = kalkan::load_model(cfg.model);
  const kalkan::LabeledCorpus corpus = load_input(cfg);
  const kalkan::NormalizerConfig norm = make_normalizer(cfg);

  std::vector<std::string> texts;
  std::vector<std::uint8_t> y;
  for (const auto& doc : corpus.docs) {
    texts.push_back(doc.text);
    y.push_back(doc.label);
  }
  const kalkan::SparseMatrix x = vectorize_against(model, texts, norm);
  const auto labels = kalkan::predict_labels(model, x);
  const kalkan::ConfusionMatrix cm = kalkan::confusion_matrix(y, labels);
  emit(cfg, render_eval(cm, kalkan::summarize_metrics(cm),
                        kalkan::parse_report_format(cfg.format)));
  return 0;
}

int run_benchmark_cmd(const CliConfig& cfg) {
  const kalkan::LabeledCorpus corpus = load_input(cfg);
  const kalkan::NormalizerConfig norm = make_normalizer(cfg);
  kalkan::BenchmarkConfig bench;
  bench.seed = cfg.seed;
  bench.test_fraction = cfg.test_fraction;
  bench.min_df = cfg.min_df;
  bench.grid_search = cfg.grid_search;
  const kalkan::BenchmarkReport report =
      kalkan::run_benchmark(corpus, norm, bench);
  emit(cfg, kalkan::render_report(report,
                                  kalkan::parse_report_format(cfg.format)));
  return 0;
}

int run_predict(const CliConfig& cfg) {
  if (cfg.model.empty()) {
    std::cerr << "predict requires --model <model file>\n";
    return 1;
  }
  const kalkan::TrainedModel model = kalkan::load_model(cfg.model);
  const kalkan::NormalizerConfig norm = make_normalizer(cfg);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  const kalkan::SparseMatrix x = vectorize_against(model, lines, norm);
  const auto probabilities = kalkan::predict_proba(model, x);
  const auto labels = kalkan::labels_from_probabilities(probabilities);
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f\t%d\n", probabilities[i],
                  static_cast<int>(labels[i]));
    out += buf;
  }
  emit(cfg, out);
  return 0;
}

int run_paper_check(const CliConfig& cfg) {
  const std::string path = cfg.input.empty()
                               ? resolve_asset("", "paper_tables.json")
                               : cfg.input;
  const auto rows = kalkan::load_paper_fixture(path);
  const kalkan::PaperCheckReport report = kalkan::reproduce_paper_tables(rows);
  emit(cfg, kalkan::render_paper_check(report));
  return report.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Turkish cyberbullying text classification: preprocessing, TF-IDF "
      "features, nineteen classifiers, evaluation"};
  app.fallthrough();
  app.require_subcommand(1);

  CliConfig cfg;
  app.add_option("--input", cfg.input, "Input CSV file (UTF-8, header row)");
  app.add_option("--text-col", cfg.text_col, "CSV column holding the message")
      ->capture_default_str();
  app.add_option("--label-col", cfg.label_col,
                 "CSV column holding the 0/1 label")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master random seed")
      ->capture_default_str();
  app.add_option("--test-fraction", cfg.test_fraction,
                 "Held-out fraction for benchmark splits")
      ->capture_default_str();
  app.add_option("--min-df", cfg.min_df,
                 "Drop terms seen in fewer documents than this")
      ->capture_default_str();
  app.add_option("--model", cfg.model,
                 "Model kind (train) or model file (evaluate/predict)");
  app.add_flag("--grid-search", cfg.grid_search,
               "Cross-validated hyperparameter search before fitting");
  app.add_option("--stopwords", cfg.stopwords,
                 "Stopword list (default: bundled Turkish list)");
  app.add_option("--lexicon", cfg.lexicon,
                 "Slang lexicon TSV (default: bundled Turkish lexicon)");
  app.add_option("--out", cfg.out, "Output file (default: stdout)");
  app.add_option("--format", cfg.format, "Report format: md, csv or json")
      ->capture_default_str();

  CLI::App* stats = app.add_subcommand("stats", "Corpus statistics report");
  CLI::App* preprocess = app.add_subcommand(
      "preprocess", "Emit normalized tokens, one line per document");
  CLI::App* train =
      app.add_subcommand("train", "Fit one model and save it to --out");
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score a labeled CSV with a saved model");
  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "Split, fit all nineteen models, report test metrics");
  CLI::App* predict = app.add_subcommand(
      "predict", "Read raw messages from stdin, print probability and label");
  CLI::App* paper_check = app.add_subcommand(
      "paper-check", "Recompute the published result tables from the "
                     "confusion counts and compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (stats->parsed()) return run_stats(cfg);
    if (preprocess->parsed()) return run_preprocess(cfg);
    if (train->parsed()) return run_train(cfg);
    if (evaluate->parsed()) return run_evaluate(cfg);
    if (benchmark->parsed()) return run_benchmark_cmd(cfg);
    if (predict->parsed()) return run_predict(cfg);
    if (paper_check->parsed()) return run_paper_check(cfg);
  } catch (const kalkan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
