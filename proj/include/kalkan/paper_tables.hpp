#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kalkan/eval.hpp"

namespace kalkan {

// One row of the published results fixture: the four printed confusion
// columns plus the expected metric strings exactly as printed (f1, accuracy,
// precision, recall).
struct PaperRow {
  std::string model;
  std::uint64_t tp = 0;
  std::uint64_t fn_printed = 0;
  std::uint64_t fp_printed = 0;
  std::uint64_t tn = 0;
  std::string expected_f1;
  std::string expected_accuracy;
  std::string expected_precision;
  std::string expected_recall;
};

std::vector<PaperRow> load_paper_fixture(const std::string& path);

struct PaperCheckCell {
  std::string metric;
  std::string printed;
  double computed_percent = 0.0;  // computed value x100, full precision
  double delta_percent = 0.0;     // computed - printed, percentage points
  bool pass = false;
};

struct PaperCheckRow {
  std::string model;
  ConfusionMatrix corrected;
  std::vector<PaperCheckCell> cells;  // f1, accuracy, precision, recall
  bool pass = false;
};

struct PaperCheckReport {
  std::vector<PaperCheckRow> rows;
  std::size_t rows_passed = 0;
  bool all_pass = false;
};

// Recomputes every row's metrics and compares them to the printed strings.
// The printed "FN"/"FP" columns are read as swapped (the published tables
// are only mutually consistent under that reading: TP + printed-FP is the
// constant positive support for the 18 rows sharing one split); pass
// `corrected_reading = false` to score the literal reading as a negative
// control. The published precision/recall columns are macro averages.
//
// A cell passes when the computed value, rounded to as many decimals as the
// printed string carries, is within 0.001 percentage points of it.
PaperCheckReport reproduce_paper_tables(const std::vector<PaperRow>& rows,
                                        bool corrected_reading = true);

// One line per cell with printed/computed/delta, then a summary line
// "<passed>/<total> rows reproduced".
std::string render_paper_check(const PaperCheckReport& report);

}  // namespace kalkan
