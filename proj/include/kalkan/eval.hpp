#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kalkan {

// Binary confusion counts with 1 as the positive label.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t total() const { return tp + fn + fp + tn; }
};

ConfusionMatrix confusion_matrix(const std::vector<std::uint8_t>& y_true,
                                 const std::vector<std::uint8_t>& y_pred);

// Metric suite over one confusion matrix. Ratios with a zero denominator are
// defined as 0. The macro figures average the positive-class rate with the
// corresponding negative-class rate:
//   macro_precision = (TP/(TP+FP) + TN/(TN+FN)) / 2
//   macro_recall    = (TP/(TP+FN) + TN/(TN+FP)) / 2
struct EvalReport {
  double accuracy = 0.0;
  double precision_pos = 0.0;
  double recall_pos = 0.0;
  double f1_pos = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
};

EvalReport summarize_metrics(const ConfusionMatrix& cm);

// Presentation form used by the reports: value x100 at 3 decimals, e.g.
// 0.909488 -> "90.949".
std::string format_metric_percent(double value);

}  // namespace kalkan
