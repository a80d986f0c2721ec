#include "kalkan/eval.hpp"

#include <cstdio>

#include "kalkan/errors.hpp"

namespace kalkan {
namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion_matrix(const std::vector<std::uint8_t>& y_true,
                                 const std::vector<std::uint8_t>& y_pred) {
  if (y_true.empty() || y_true.size() != y_pred.size()) {
    raise(ErrorKind::Shape,
          "label vectors must be non-empty and of equal length");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i]) {
      (y_pred[i] ? cm.tp : cm.fn) += 1;
    } else {
      (y_pred[i] ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

EvalReport summarize_metrics(const ConfusionMatrix& cm) {
  EvalReport r;
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  r.precision_pos = ratio(cm.tp, cm.tp + cm.fp);
  r.recall_pos = ratio(cm.tp, cm.tp + cm.fn);
  const double pr = r.precision_pos + r.recall_pos;
  r.f1_pos = pr == 0.0 ? 0.0 : 2.0 * r.precision_pos * r.recall_pos / pr;
  r.macro_precision =
      0.5 * (ratio(cm.tp, cm.tp + cm.fp) + ratio(cm.tn, cm.tn + cm.fn));
  r.macro_recall =
      0.5 * (ratio(cm.tp, cm.tp + cm.fn) + ratio(cm.tn, cm.tn + cm.fp));
  return r;
}

std::string format_metric_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", value * 100.0);
  return buf;
}

}  // namespace kalkan
