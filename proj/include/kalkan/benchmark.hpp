#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kalkan/corpus.hpp"
#include "kalkan/eval.hpp"
#include "kalkan/model.hpp"
#include "kalkan/normalizer.hpp"

namespace kalkan {

struct BenchmarkConfig {
  std::uint64_t seed = 42;
  double test_fraction = 0.3;
  std::uint32_t min_df = 2;
  bool grid_search = false;
  std::int64_t folds = 5;
};

struct BenchmarkRow {
  ModelKind kind = ModelKind::gaussian_nb;
  ClassifierSpec spec;  // the hyperparameters actually fitted
  ConfusionMatrix confusion;
  EvalReport metrics;
  // Wall time is informational only; renders exclude it so reports from
  // identical inputs are byte-identical.
  double wall_seconds = 0.0;
};

struct BenchmarkReport {
  std::string corpus;
  std::uint64_t seed = 42;
  double test_fraction = 0.3;
  std::uint64_t n_train = 0;
  std::uint64_t n_test = 0;
  std::uint64_t vocabulary_size = 0;
  std::string fingerprint;
  std::vector<BenchmarkRow> rows;  // sorted by f1_pos descending
};

// Full pipeline: stratified split, normalization, vocabulary/TF-IDF fitted
// on the training split only, one model per kind (the voting row consumes
// the 18 fitted base models), evaluation on the test split. Model i trains
// with mix_seed(seed, i) in kind order; with grid_search enabled the
// per-kind search runs first and the winning spec is fitted. Rows are
// sorted by positive-class F1 descending, ties keeping kind order.
BenchmarkReport run_benchmark(const LabeledCorpus& corpus,
                              const NormalizerConfig& normalizer,
                              const BenchmarkConfig& cfg);

enum class ReportFormat { markdown, csv, json };

ReportFormat parse_report_format(const std::string& name);  // md|csv|json

// markdown mirrors the two published tables (confusion counts; metrics x100
// at 3 decimals); csv and json carry the metrics at full precision.
std::string render_report(const BenchmarkReport& report, ReportFormat format);

}  // namespace kalkan
