#include "kalkan/model.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>

#include "kalkan/errors.hpp"
#include "kalkan/random.hpp"

namespace kalkan {
namespace {

struct ParamDefault {
  const char* name;
  ParamValue value;
};

const std::vector<ParamDefault>& param_defaults(ModelKind kind) {
  static const std::vector<ParamDefault> gaussian{{"k", std::int64_t{2000}}};
  static const std::vector<ParamDefault> nb_alpha{{"alpha", 1.0}};
  static const std::vector<ParamDefault> cart{
      {"max_depth", std::int64_t{0}},
      {"min_samples_split", std::int64_t{2}},
      {"min_samples_leaf", std::int64_t{1}}};
  static const std::vector<ParamDefault> extra{
      {"n_estimators", std::int64_t{100}},
      {"max_depth", std::int64_t{0}},
      {"min_samples_split", std::int64_t{2}},
      {"min_samples_leaf", std::int64_t{1}},
      {"max_features", std::int64_t{0}}};
  static const std::vector<ParamDefault> forest{
      {"n_estimators", std::int64_t{100}},
      {"max_depth", std::int64_t{0}},
      {"min_samples_split", std::int64_t{2}},
      {"min_samples_leaf", std::int64_t{1}},
      {"max_features", std::int64_t{0}},
      {"bootstrap", std::int64_t{1}}};
  static const std::vector<ParamDefault> lda{{"k", std::int64_t{2000}},
                                             {"shrinkage", 0.1}};
  static const std::vector<ParamDefault> qda{{"k", std::int64_t{2000}},
                                             {"ridge", 1e-3}};
  static const std::vector<ParamDefault> ada{{"rounds", std::int64_t{50}}};
  static const std::vector<ParamDefault> gbm{{"rounds", std::int64_t{100}},
                                             {"eta", 0.1},
                                             {"max_depth", std::int64_t{3}}};
  static const std::vector<ParamDefault> xgb{{"rounds", std::int64_t{50}},
                                             {"eta", 0.3},
                                             {"max_depth", std::int64_t{3}},
                                             {"lambda", 1.0}};
  static const std::vector<ParamDefault> lgbm{
      {"rounds", std::int64_t{100}}, {"eta", 0.1},
      {"max_leaves", std::int64_t{31}}, {"min_child", std::int64_t{20}},
      {"lambda", 1.0},               {"max_bins", std::int64_t{255}}};
  static const std::vector<ParamDefault> logistic{
      {"lambda", 1e-4}, {"epochs", std::int64_t{20}}, {"eta0", 0.1}};
  static const std::vector<ParamDefault> perceptron{
      {"epochs", std::int64_t{20}}, {"eta0", 0.1}};
  static const std::vector<ParamDefault> sgd{{"loss", std::string("hinge")},
                                             {"lambda", 1e-4},
                                             {"epochs", std::int64_t{20}},
                                             {"eta0", 0.1}};
  static const std::vector<ParamDefault> knn{
      {"k", std::int64_t{5}}, {"distance", std::string("cosine")}};
  static const std::vector<ParamDefault> svm{{"c", 1.0},
                                             {"kernel", std::string("rbf")},
                                             {"gamma", 0.0},
                                             {"tol", 1e-3},
                                             {"max_passes", std::int64_t{1000}}};
  static const std::vector<ParamDefault> none{};

  switch (kind) {
    case ModelKind::gaussian_nb: return gaussian;
    case ModelKind::multinomial_nb: return nb_alpha;
    case ModelKind::bernoulli_nb: return nb_alpha;
    case ModelKind::decision_tree: return cart;
    case ModelKind::extra_trees: return extra;
    case ModelKind::lda: return lda;
    case ModelKind::qda: return qda;
    case ModelKind::adaboost: return ada;
    case ModelKind::gbm: return gbm;
    case ModelKind::random_forest: return forest;
    case ModelKind::logistic_regression: return logistic;
    case ModelKind::perceptron: return perceptron;
    case ModelKind::linear_svc: return logistic;
    case ModelKind::xgb_style: return xgb;
    case ModelKind::knn: return knn;
    case ModelKind::svm: return svm;
    case ModelKind::sgd: return sgd;
    case ModelKind::lgbm_style: return lgbm;
    case ModelKind::voting: return none;
  }
  raise(ErrorKind::Spec, "unknown model kind");
}

ParamValue coerce(const std::string& name, const ParamValue& def,
                  const ParamValue& given) {
  if (std::holds_alternative<std::int64_t>(def)) {
    if (const auto* i = std::get_if<std::int64_t>(&given)) return *i;
    if (const auto* d = std::get_if<double>(&given)) {
      const auto i = static_cast<std::int64_t>(*d);
      if (static_cast<double>(i) == *d) return i;
      raise(ErrorKind::Parameter, "parameter " + name + " must be an integer");
    }
    raise(ErrorKind::Parameter, "parameter " + name + " must be an integer");
  }
  if (std::holds_alternative<double>(def)) {
    if (const auto* d = std::get_if<double>(&given)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&given)) {
      return static_cast<double>(*i);
    }
    raise(ErrorKind::Parameter, "parameter " + name + " must be a number");
  }
  if (std::holds_alternative<std::string>(given)) return given;
  raise(ErrorKind::Parameter, "parameter " + name + " must be a string");
}

LinearLoss parse_linear_loss(const std::string& name) {
  if (name == "hinge") return LinearLoss::hinge;
  if (name == "logistic") return LinearLoss::logistic;
  if (name == "perceptron") return LinearLoss::perceptron;
  raise(ErrorKind::Parameter, "unknown loss: " + name);
}

std::size_t checked_top_k(std::int64_t k) {
  if (k < 1) raise(ErrorKind::Parameter, "k must be at least 1");
  return static_cast<std::size_t>(k);
}

void check_finite_features(const SparseMatrix& x) {
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    for (const SparseEntry& e : x.row(i).entries) {
      if (!std::isfinite(e.value)) {
        raise(ErrorKind::Data, "non-finite feature value");
      }
    }
  }
}

void sort_members_by_kind(
    std::vector<std::shared_ptr<const TrainedModel>>& members) {
  std::stable_sort(members.begin(), members.end(),
                   [](const auto& a, const auto& b) {
                     return static_cast<std::uint32_t>(a->spec.kind) <
                            static_cast<std::uint32_t>(b->spec.kind);
                   });
}

ModelState fit_state(const ClassifierSpec& spec, const SparseMatrix& x,
                     const std::vector<std::uint8_t>& y, std::uint64_t seed);

TrainedModel fit_all_member_kinds_and_vote(
    const ClassifierSpec& spec, const SparseMatrix& x,
    const std::vector<std::uint8_t>& y, std::uint64_t seed,
    std::shared_ptr<const FeatureSpace> space) {
  std::vector<std::shared_ptr<const TrainedModel>> members;
  members.reserve(kNumModelKinds - 1);
  for (ModelKind kind : all_model_kinds()) {
    if (kind == ModelKind::voting) continue;
    const std::uint64_t member_seed =
        mix_seed(seed, static_cast<std::uint64_t>(kind));
    members.push_back(std::make_shared<TrainedModel>(
        fit_model(default_spec(kind), x, y, member_seed, space)));
  }
  TrainedModel voting =
      fit_voting_from_members(std::move(members), seed, y.size(), space);
  voting.spec = spec;
  voting.fingerprint = x.fingerprint;
  return voting;
}

ModelState fit_state(const ClassifierSpec& spec, const SparseMatrix& x,
                     const std::vector<std::uint8_t>& y, std::uint64_t seed) {
  switch (spec.kind) {
    case ModelKind::gaussian_nb:
      return fit_gaussian_nb(x, y, checked_top_k(param_int(spec, "k")));
    case ModelKind::multinomial_nb:
      return fit_multinomial_nb(x, y, param_real(spec, "alpha"));
    case ModelKind::bernoulli_nb:
      return fit_bernoulli_nb(x, y, param_real(spec, "alpha"));
    case ModelKind::decision_tree: {
      TreeParams params;
      params.n_estimators = 1;
      params.max_depth = param_int(spec, "max_depth");
      params.min_samples_split = param_int(spec, "min_samples_split");
      params.min_samples_leaf = param_int(spec, "min_samples_leaf");
      params.bootstrap = false;
      return fit_tree_ensemble(ForestKind::cart, x, y, params, seed);
    }
    case ModelKind::extra_trees: {
      TreeParams params;
      params.n_estimators = param_int(spec, "n_estimators");
      params.max_depth = param_int(spec, "max_depth");
      params.min_samples_split = param_int(spec, "min_samples_split");
      params.min_samples_leaf = param_int(spec, "min_samples_leaf");
      params.max_features = param_int(spec, "max_features");
      params.bootstrap = false;
      return fit_tree_ensemble(ForestKind::extra_trees, x, y, params, seed);
    }
    case ModelKind::random_forest: {
      TreeParams params;
      params.n_estimators = param_int(spec, "n_estimators");
      params.max_depth = param_int(spec, "max_depth");
      params.min_samples_split = param_int(spec, "min_samples_split");
      params.min_samples_leaf = param_int(spec, "min_samples_leaf");
      params.max_features = param_int(spec, "max_features");
      params.bootstrap = param_int(spec, "bootstrap") != 0;
      return fit_tree_ensemble(ForestKind::random_forest, x, y, params, seed);
    }
    case ModelKind::lda:
      return fit_lda(x, y, checked_top_k(param_int(spec, "k")),
                     param_real(spec, "shrinkage"));
    case ModelKind::qda:
      return fit_qda(x, y, checked_top_k(param_int(spec, "k")),
                     param_real(spec, "ridge"));
    case ModelKind::adaboost:
      return fit_adaboost(x, y, param_int(spec, "rounds"), seed);
    case ModelKind::gbm:
      return fit_gbm(x, y, param_int(spec, "rounds"), param_real(spec, "eta"),
                     param_int(spec, "max_depth"));
    case ModelKind::xgb_style:
      return fit_xgb(x, y, param_int(spec, "rounds"), param_real(spec, "eta"),
                     param_int(spec, "max_depth"), param_real(spec, "lambda"));
    case ModelKind::lgbm_style:
      return fit_leafwise(x, y, param_int(spec, "rounds"),
                          param_real(spec, "eta"), param_int(spec, "max_leaves"),
                          param_int(spec, "min_child"),
                          param_real(spec, "lambda"),
                          param_int(spec, "max_bins"));
    case ModelKind::logistic_regression:
      return fit_linear(LinearLoss::logistic, x, y, param_real(spec, "lambda"),
                        param_int(spec, "epochs"), param_real(spec, "eta0"),
                        seed);
    case ModelKind::perceptron:
      return fit_linear(LinearLoss::perceptron, x, y, 0.0,
                        param_int(spec, "epochs"), param_real(spec, "eta0"),
                        seed);
    case ModelKind::linear_svc:
      return fit_linear(LinearLoss::hinge, x, y, param_real(spec, "lambda"),
                        param_int(spec, "epochs"), param_real(spec, "eta0"),
                        seed);
    case ModelKind::sgd:
      return fit_linear(parse_linear_loss(param_text(spec, "loss")), x, y,
                        param_real(spec, "lambda"), param_int(spec, "epochs"),
                        param_real(spec, "eta0"), seed);
    case ModelKind::knn:
      return fit_knn(x, y, param_int(spec, "k"),
                     parse_knn_distance(param_text(spec, "distance")));
    case ModelKind::svm: {
      SvmConfig cfg;
      cfg.c = param_real(spec, "c");
      cfg.kernel = parse_svm_kernel(param_text(spec, "kernel"));
      cfg.gamma = param_real(spec, "gamma");
      cfg.tol = param_real(spec, "tol");
      cfg.max_passes = param_int(spec, "max_passes");
      return fit_svm_smo(x, y, cfg, seed);
    }
    case ModelKind::voting:
      break;  // handled by the caller
  }
  raise(ErrorKind::Spec, "unknown model kind");
}

}  // namespace

const std::array<ModelKind, kNumModelKinds>& all_model_kinds() {
  static const std::array<ModelKind, kNumModelKinds> kinds = {
      ModelKind::gaussian_nb,    ModelKind::multinomial_nb,
      ModelKind::bernoulli_nb,   ModelKind::decision_tree,
      ModelKind::extra_trees,    ModelKind::lda,
      ModelKind::qda,            ModelKind::adaboost,
      ModelKind::gbm,            ModelKind::random_forest,
      ModelKind::logistic_regression, ModelKind::perceptron,
      ModelKind::linear_svc,     ModelKind::xgb_style,
      ModelKind::knn,            ModelKind::svm,
      ModelKind::sgd,            ModelKind::lgbm_style,
      ModelKind::voting,
  };
  return kinds;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::gaussian_nb: return "gaussian_nb";
    case ModelKind::multinomial_nb: return "multinomial_nb";
    case ModelKind::bernoulli_nb: return "bernoulli_nb";
    case ModelKind::decision_tree: return "decision_tree";
    case ModelKind::extra_trees: return "extra_trees";
    case ModelKind::lda: return "lda";
    case ModelKind::qda: return "qda";
    case ModelKind::adaboost: return "adaboost";
    case ModelKind::gbm: return "gbm";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::logistic_regression: return "logistic_regression";
    case ModelKind::perceptron: return "perceptron";
    case ModelKind::linear_svc: return "linear_svc";
    case ModelKind::xgb_style: return "xgb_style";
    case ModelKind::knn: return "knn";
    case ModelKind::svm: return "svm";
    case ModelKind::sgd: return "sgd";
    case ModelKind::lgbm_style: return "lgbm_style";
    case ModelKind::voting: return "voting";
  }
  raise(ErrorKind::Spec, "unknown model kind");
}

ModelKind parse_model_kind(const std::string& name) {
  for (ModelKind kind : all_model_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  raise(ErrorKind::Spec, "unknown model kind: " + name);
}

ClassifierSpec default_spec(ModelKind kind) {
  ClassifierSpec spec;
  spec.kind = kind;
  for (const ParamDefault& p : param_defaults(kind)) {
    spec.params.emplace(p.name, p.value);
  }
  return spec;
}

ClassifierSpec make_spec(ModelKind kind, const ParamMap& overrides) {
  ClassifierSpec spec = default_spec(kind);
  for (const auto& [name, value] : overrides) {
    auto it = spec.params.find(name);
    if (it == spec.params.end()) {
      raise(ErrorKind::Parameter,
            "unknown parameter " + name + " for kind " + to_string(kind));
    }
    it->second = coerce(name, it->second, value);
  }
  return spec;
}

std::int64_t param_int(const ClassifierSpec& spec, const std::string& name) {
  const auto it = spec.params.find(name);
  if (it == spec.params.end() || !std::holds_alternative<std::int64_t>(it->second)) {
    raise(ErrorKind::Parameter, "missing integer parameter " + name);
  }
  return std::get<std::int64_t>(it->second);
}

double param_real(const ClassifierSpec& spec, const std::string& name) {
  const auto it = spec.params.find(name);
  if (it == spec.params.end()) {
    raise(ErrorKind::Parameter, "missing real parameter " + name);
  }
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) {
    return static_cast<double>(*i);
  }
  raise(ErrorKind::Parameter, "missing real parameter " + name);
}

std::string param_text(const ClassifierSpec& spec, const std::string& name) {
  const auto it = spec.params.find(name);
  if (it == spec.params.end() || !std::holds_alternative<std::string>(it->second)) {
    raise(ErrorKind::Parameter, "missing text parameter " + name);
  }
  return std::get<std::string>(it->second);
}

TrainedModel fit_model(const ClassifierSpec& spec, const SparseMatrix& x,
                       const std::vector<std::uint8_t>& y, std::uint64_t seed,
                       std::shared_ptr<const FeatureSpace> space) {
  const ClassifierSpec full = make_spec(spec.kind, spec.params);
  if (x.n_rows() != y.size()) {
    raise(ErrorKind::Shape, "row count does not match label count");
  }
  if (y.empty()) raise(ErrorKind::Data, "training set is empty");
  check_finite_features(x);

  bool has_negative = false;
  bool has_positive = false;
  for (std::uint8_t label : y) (label ? has_positive : has_negative) = true;

  TrainedModel m;
  m.spec = full;
  m.seed = seed;
  m.n_train = y.size();
  m.fingerprint = x.fingerprint;
  m.space = std::move(space);
  if (!has_negative || !has_positive) {
    m.state = ConstantState{has_positive ? 1.0 : 0.0};
    return m;
  }
  if (full.kind == ModelKind::voting) {
    return fit_all_member_kinds_and_vote(full, x, y, seed, m.space);
  }
  m.state = fit_state(full, x, y, seed);
  return m;
}

TrainedModel fit_voting_from_members(
    std::vector<std::shared_ptr<const TrainedModel>> members,
    std::uint64_t seed, std::uint64_t n_train,
    std::shared_ptr<const FeatureSpace> space) {
  if (members.empty()) {
    raise(ErrorKind::Parameter, "voting requires at least one member");
  }
  std::string fingerprint;
  for (const auto& member : members) {
    if (!member) raise(ErrorKind::Parameter, "voting member is null");
    if (member->spec.kind == ModelKind::voting) {
      raise(ErrorKind::Parameter, "voting members must be base models");
    }
    if (member->fingerprint.empty()) continue;
    if (fingerprint.empty()) {
      fingerprint = member->fingerprint;
    } else if (fingerprint != member->fingerprint) {
      raise(ErrorKind::Compatibility,
            "voting members were fitted on different vocabularies");
    }
  }
  sort_members_by_kind(members);

  TrainedModel m;
  m.spec = default_spec(ModelKind::voting);
  m.seed = seed;
  m.n_train = n_train;
  m.fingerprint = fingerprint;
  m.space = std::move(space);
  m.state = VotingState{std::move(members)};
  return m;
}

std::vector<double> predict_proba(const TrainedModel& m,
                                  const SparseMatrix& x) {
  if (!m.fingerprint.empty() && !x.fingerprint.empty() &&
      m.fingerprint != x.fingerprint) {
    raise(ErrorKind::Compatibility,
          "model and matrix were built from different vocabularies");
  }
  return std::visit(
      [&](const auto& state) -> std::vector<double> {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, ConstantState>) {
          return std::vector<double>(x.n_rows(), state.probability);
        } else if constexpr (std::is_same_v<T, VotingState>) {
          std::vector<double> acc(x.n_rows(), 0.0);
          for (const auto& member : state.members) {
            const std::vector<double> p = predict_proba(*member, x);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
          }
          const auto count = static_cast<double>(state.members.size());
          for (double& v : acc) v /= count;
          return acc;
        } else {
          return predict_proba(state, x);
        }
      },
      m.state);
}

std::vector<std::uint8_t> labels_from_probabilities(
    const std::vector<double>& probabilities) {
  std::vector<std::uint8_t> out(probabilities.size(), 0);
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    out[i] = probabilities[i] > 0.5 ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> predict_labels(const TrainedModel& m,
                                         const SparseMatrix& x) {
  return labels_from_probabilities(predict_proba(m, x));
}

}  // namespace kalkan
