#include "kalkan/grid_search.hpp"

#include <algorithm>

#include "kalkan/errors.hpp"
#include "kalkan/eval.hpp"
#include "kalkan/random.hpp"

namespace kalkan {
namespace {

SparseMatrix gather_rows(const SparseMatrix& x,
                         const std::vector<std::uint32_t>& rows) {
  SparseMatrix out(x.n_features);
  out.fingerprint = x.fingerprint;
  out.reserve(rows.size());
  for (std::uint32_t r : rows) out.add_row(x.row(r));
  return out;
}

std::vector<std::uint8_t> gather_labels(const std::vector<std::uint8_t>& y,
                                        const std::vector<std::uint32_t>& rows) {
  std::vector<std::uint8_t> out;
  out.reserve(rows.size());
  for (std::uint32_t r : rows) out.push_back(y[r]);
  return out;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> stratified_folds(
    const std::vector<std::uint8_t>& y, std::int64_t folds,
    std::uint64_t seed) {
  if (folds < 2) raise(ErrorKind::Parameter, "folds must be at least 2");
  if (static_cast<std::int64_t>(y.size()) < folds) {
    raise(ErrorKind::Stratification,
          "fewer rows than folds; every fold needs validation rows");
  }
  std::vector<std::vector<std::uint32_t>> out(
      static_cast<std::size_t>(folds));
  for (std::uint8_t label = 0; label < 2; ++label) {
    std::vector<std::uint32_t> indices;
    for (std::uint32_t i = 0; i < y.size(); ++i) {
      if (y[i] == label) indices.push_back(i);
    }
    SplitMix64 rng(mix_seed(seed, label));
    seeded_shuffle(indices, rng);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      out[i % out.size()].push_back(indices[i]);
    }
  }
  for (auto& fold : out) std::sort(fold.begin(), fold.end());
  return out;
}

std::vector<ParamMap> default_grid(ModelKind kind) {
  const auto reals = [](const char* name, std::initializer_list<double> vs) {
    std::vector<ParamMap> grid;
    for (double v : vs) grid.push_back(ParamMap{{name, v}});
    return grid;
  };
  const auto ints = [](const char* name,
                       std::initializer_list<std::int64_t> vs) {
    std::vector<ParamMap> grid;
    for (std::int64_t v : vs) grid.push_back(ParamMap{{name, v}});
    return grid;
  };
  switch (kind) {
    case ModelKind::gaussian_nb: return ints("k", {500, 1000, 2000});
    case ModelKind::multinomial_nb: return reals("alpha", {0.5, 1.0, 2.0});
    case ModelKind::bernoulli_nb: return reals("alpha", {0.5, 1.0, 2.0});
    case ModelKind::decision_tree: return ints("max_depth", {0, 10, 20});
    case ModelKind::extra_trees: return ints("n_estimators", {50, 100, 200});
    case ModelKind::lda: return reals("shrinkage", {0.0, 0.1, 0.3});
    case ModelKind::qda: return reals("ridge", {1e-4, 1e-3, 1e-2});
    case ModelKind::adaboost: return ints("rounds", {25, 50, 100});
    case ModelKind::gbm: return reals("eta", {0.05, 0.1, 0.2});
    case ModelKind::random_forest: return ints("n_estimators", {50, 100, 200});
    case ModelKind::logistic_regression:
      return reals("lambda", {1e-5, 1e-4, 1e-3});
    case ModelKind::perceptron: return ints("epochs", {10, 20, 40});
    case ModelKind::linear_svc: return reals("lambda", {1e-5, 1e-4, 1e-3});
    case ModelKind::xgb_style: {
      std::vector<ParamMap> grid;
      for (std::int64_t depth : {2, 3}) {
        for (double eta : {0.1, 0.3}) {
          grid.push_back(ParamMap{{"max_depth", depth}, {"eta", eta}});
        }
      }
      return grid;
    }
    case ModelKind::knn: return ints("k", {3, 5, 9});
    case ModelKind::svm: return reals("c", {0.5, 1.0, 2.0});
    case ModelKind::sgd: return reals("lambda", {1e-5, 1e-4, 1e-3});
    case ModelKind::lgbm_style: return ints("max_leaves", {15, 31, 63});
    case ModelKind::voting: return {ParamMap{}};
  }
  raise(ErrorKind::Spec, "unknown model kind");
}

GridSearchResult grid_search(ModelKind kind, const std::vector<ParamMap>& grid,
                             const SparseMatrix& x,
                             const std::vector<std::uint8_t>& y,
                             std::int64_t folds, std::uint64_t seed) {
  if (grid.empty()) raise(ErrorKind::Parameter, "grid must not be empty");
  const auto fold_rows = stratified_folds(y, folds, seed);
  for (const auto& fold : fold_rows) {
    if (fold.empty()) {
      raise(ErrorKind::Stratification, "a fold has no validation rows");
    }
  }

  // Fold train/validation matrices are shared by every grid point.
  std::vector<SparseMatrix> train_x;
  std::vector<SparseMatrix> val_x;
  std::vector<std::vector<std::uint8_t>> train_y;
  std::vector<std::vector<std::uint8_t>> val_y;
  for (std::size_t f = 0; f < fold_rows.size(); ++f) {
    std::vector<std::uint32_t> train_rows;
    for (std::size_t g = 0; g < fold_rows.size(); ++g) {
      if (g == f) continue;
      train_rows.insert(train_rows.end(), fold_rows[g].begin(),
                        fold_rows[g].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    train_x.push_back(gather_rows(x, train_rows));
    train_y.push_back(gather_labels(y, train_rows));
    val_x.push_back(gather_rows(x, fold_rows[f]));
    val_y.push_back(gather_labels(y, fold_rows[f]));
  }

  GridSearchResult result;
  std::size_t best_index = 0;
  for (std::size_t point = 0; point < grid.size(); ++point) {
    const ClassifierSpec spec = make_spec(kind, grid[point]);
    CvCell cell;
    cell.params = grid[point];
    for (std::size_t f = 0; f < fold_rows.size(); ++f) {
      const TrainedModel model =
          fit_model(spec, train_x[f], train_y[f], mix_seed(seed, f));
      const auto predicted = predict_labels(model, val_x[f]);
      const EvalReport metrics =
          summarize_metrics(confusion_matrix(val_y[f], predicted));
      cell.fold_f1.push_back(metrics.f1_pos);
      cell.fold_accuracy.push_back(metrics.accuracy);
      cell.mean_f1 += metrics.f1_pos;
      cell.mean_accuracy += metrics.accuracy;
    }
    cell.mean_f1 /= static_cast<double>(fold_rows.size());
    cell.mean_accuracy /= static_cast<double>(fold_rows.size());
    result.table.push_back(std::move(cell));

    const CvCell& current = result.table.back();
    const CvCell& best = result.table[best_index];
    if (point > 0 && (current.mean_f1 > best.mean_f1 ||
                      (current.mean_f1 == best.mean_f1 &&
                       current.mean_accuracy > best.mean_accuracy))) {
      best_index = point;
    }
  }
  result.best = make_spec(kind, grid[best_index]);
  return result;
}

}  // namespace kalkan
