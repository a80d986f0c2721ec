#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kalkan/bayes.hpp"
#include "kalkan/boosting.hpp"
#include "kalkan/discriminant.hpp"
#include "kalkan/featurizer.hpp"
#include "kalkan/linear.hpp"
#include "kalkan/neighbors.hpp"
#include "kalkan/sparse.hpp"
#include "kalkan/svm.hpp"
#include "kalkan/tree.hpp"

namespace kalkan {

// The nineteen supported classifiers. Enum order is the seeding order: model
// i in a benchmark run trains with mix_seed(master_seed, i).
enum class ModelKind : std::uint32_t {
  gaussian_nb = 0,
  multinomial_nb,
  bernoulli_nb,
  decision_tree,
  extra_trees,
  lda,
  qda,
  adaboost,
  gbm,
  random_forest,
  logistic_regression,
  perceptron,
  linear_svc,
  xgb_style,
  knn,
  svm,
  sgd,
  lgbm_style,
  voting,
};

inline constexpr std::size_t kNumModelKinds = 19;

const std::array<ModelKind, kNumModelKinds>& all_model_kinds();

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);  // unknown -> spec error

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

// A model kind plus its full hyperparameter assignment.
struct ClassifierSpec {
  ModelKind kind = ModelKind::gaussian_nb;
  ParamMap params;
};

ClassifierSpec default_spec(ModelKind kind);

// Defaults overlaid with `overrides`. Unknown names raise a parameter error;
// integers widen to reals, reals narrow to integers only when exact.
ClassifierSpec make_spec(ModelKind kind, const ParamMap& overrides);

// Typed lookups against the validated full parameter set.
std::int64_t param_int(const ClassifierSpec& spec, const std::string& name);
double param_real(const ClassifierSpec& spec, const std::string& name);
std::string param_text(const ClassifierSpec& spec, const std::string& name);

// The fitted featurization a model was trained against: vocabulary, idf and
// the content fingerprint that guards predict-time compatibility.
struct FeatureSpace {
  Vocabulary vocabulary;
  IdfModel idf;
  std::string fingerprint;
};

// Degenerate single-label training collapses every kind to this.
struct ConstantState {
  double probability = 0.5;
};

struct TrainedModel;

// Soft voting ensemble: unweighted mean of the member probabilities,
// accumulated in model-kind order so member permutation cannot change the
// result.
struct VotingState {
  std::vector<std::shared_ptr<const TrainedModel>> members;
};

using ModelState =
    std::variant<ConstantState, MultinomialNbState, BernoulliNbState,
                 GaussianNbState, LinearState, SmoState, DiscriminantState,
                 ForestState, AdaboostState, GradientBoostState, KnnState,
                 VotingState>;

struct TrainedModel {
  ClassifierSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t n_train = 0;
  std::string fingerprint;  // empty when trained on an unfingerprinted matrix
  std::shared_ptr<const FeatureSpace> space;  // optional
  ModelState state;
};

// Pure in (spec, x, y, seed): identical arguments give bit-identical models.
// Training sets holding a single label short-circuit to a constant model for
// every kind. Partial parameter maps are completed with defaults; unknown
// names raise a parameter error, non-finite features a data error.
TrainedModel fit_model(const ClassifierSpec& spec, const SparseMatrix& x,
                       const std::vector<std::uint8_t>& y, std::uint64_t seed,
                       std::shared_ptr<const FeatureSpace> space = nullptr);

// Assembles a voting model from already-fitted members (any non-empty set of
// non-voting models with matching fingerprints). fit_model on kind voting
// trains the other 18 kinds at their defaults with member seeds
// mix_seed(seed, member_kind_index) and is bit-identical to assembling those
// same fits through this function.
TrainedModel fit_voting_from_members(
    std::vector<std::shared_ptr<const TrainedModel>> members,
    std::uint64_t seed, std::uint64_t n_train,
    std::shared_ptr<const FeatureSpace> space = nullptr);

// One probability per row, in [0, 1]. Kinds without native probabilities
// squash their decision score through a sigmoid. A nonempty model
// fingerprint that differs from a nonempty matrix fingerprint raises a
// compatibility error.
std::vector<double> predict_proba(const TrainedModel& m, const SparseMatrix& x);

// Hard labels: 1 iff probability > 0.5 (an exact 0.5 stays 0).
std::vector<std::uint8_t> predict_labels(const TrainedModel& m,
                                         const SparseMatrix& x);
std::vector<std::uint8_t> labels_from_probabilities(
    const std::vector<double>& probabilities);

}  // namespace kalkan
