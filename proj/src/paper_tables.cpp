#include "kalkan/paper_tables.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "kalkan/errors.hpp"

namespace kalkan {
namespace {

using nlohmann::json;

// Decomposes a printed decimal like "90.949" into its scaled integer value
// (90949) and decimal count (3), so comparisons happen at exactly the
// precision the table carries.
struct PrintedDecimal {
  std::int64_t scaled = 0;
  int decimals = 0;
  double value = 0.0;
};

PrintedDecimal parse_printed(const std::string& text) {
  PrintedDecimal out;
  std::size_t i = 0;
  if (text.empty()) raise(ErrorKind::Asset, "empty expected metric string");
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (text[i] < '0' || text[i] > '9') {
      raise(ErrorKind::Asset, "malformed expected metric: " + text);
    }
    out.scaled = out.scaled * 10 + (text[i] - '0');
  }
  if (i < text.size()) {
    for (++i; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') {
        raise(ErrorKind::Asset, "malformed expected metric: " + text);
      }
      out.scaled = out.scaled * 10 + (text[i] - '0');
      ++out.decimals;
    }
  }
  double scale = 1.0;
  for (int d = 0; d < out.decimals; ++d) scale *= 10.0;
  out.value = static_cast<double>(out.scaled) / scale;
  return out;
}

PaperCheckCell check_cell(const std::string& metric, const std::string& printed,
                          double computed_fraction) {
  PaperCheckCell cell;
  cell.metric = metric;
  cell.printed = printed;
  cell.computed_percent = computed_fraction * 100.0;

  const PrintedDecimal expected = parse_printed(printed);
  double scale = 1.0;
  for (int d = 0; d < expected.decimals; ++d) scale *= 10.0;
  const auto rounded =
      static_cast<std::int64_t>(std::llround(cell.computed_percent * scale));
  const double tolerance_scaled = (0.001 + 1e-9) * scale;
  cell.pass = std::llabs(rounded - expected.scaled) <= tolerance_scaled;
  cell.delta_percent = cell.computed_percent - expected.value;
  return cell;
}

}  // namespace

std::vector<PaperRow> load_paper_fixture(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Asset, "cannot open fixture: " + path);
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    raise(ErrorKind::Asset, "fixture is not valid JSON: " + path);
  }
  try {
    std::vector<PaperRow> rows;
    for (const json& rj : doc.at("rows")) {
      PaperRow row;
      row.model = rj.at("model").get<std::string>();
      row.tp = rj.at("tp").get<std::uint64_t>();
      row.fn_printed = rj.at("fn_printed").get<std::uint64_t>();
      row.fp_printed = rj.at("fp_printed").get<std::uint64_t>();
      row.tn = rj.at("tn").get<std::uint64_t>();
      const json& expected = rj.at("expected");
      row.expected_f1 = expected.at("f1").get<std::string>();
      row.expected_accuracy = expected.at("accuracy").get<std::string>();
      row.expected_precision = expected.at("precision").get<std::string>();
      row.expected_recall = expected.at("recall").get<std::string>();
      rows.push_back(std::move(row));
    }
    return rows;
  } catch (const json::exception& e) {
    raise(ErrorKind::Asset, std::string("fixture is malformed: ") + e.what());
  }
}

PaperCheckReport reproduce_paper_tables(const std::vector<PaperRow>& rows,
                                        bool corrected_reading) {
  PaperCheckReport report;
  for (const PaperRow& row : rows) {
    PaperCheckRow out;
    out.model = row.model;
    out.corrected.tp = row.tp;
    out.corrected.fn = corrected_reading ? row.fp_printed : row.fn_printed;
    out.corrected.fp = corrected_reading ? row.fn_printed : row.fp_printed;
    out.corrected.tn = row.tn;

    const EvalReport metrics = summarize_metrics(out.corrected);
    out.cells.push_back(check_cell("f1", row.expected_f1, metrics.f1_pos));
    out.cells.push_back(
        check_cell("accuracy", row.expected_accuracy, metrics.accuracy));
    out.cells.push_back(check_cell("precision", row.expected_precision,
                                   metrics.macro_precision));
    out.cells.push_back(
        check_cell("recall", row.expected_recall, metrics.macro_recall));

    out.pass = true;
    for (const PaperCheckCell& cell : out.cells) out.pass = out.pass && cell.pass;
    if (out.pass) ++report.rows_passed;
    report.rows.push_back(std::move(out));
  }
  report.all_pass = report.rows_passed == report.rows.size();
  return report;
}

std::string render_paper_check(const PaperCheckReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-10s %10s %12s %10s  %s\n", "model",
                "metric", "printed", "computed", "delta", "status");
  out += line;
  for (const PaperCheckRow& row : report.rows) {
    for (const PaperCheckCell& cell : row.cells) {
      std::snprintf(line, sizeof line, "%-20s %-10s %10s %12.6f %+10.6f  %s\n",
                    row.model.c_str(), cell.metric.c_str(),
                    cell.printed.c_str(), cell.computed_percent,
                    cell.delta_percent, cell.pass ? "ok" : "MISMATCH");
      out += line;
    }
  }
  std::snprintf(line, sizeof line, "%zu/%zu rows reproduced\n",
                report.rows_passed, report.rows.size());
  out += line;
  return out;
}

}  // namespace kalkan
