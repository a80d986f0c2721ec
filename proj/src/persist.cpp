#include "kalkan/persist.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>
#include <variant>

#include "kalkan/errors.hpp"

namespace kalkan {
namespace {

using nlohmann::json;

void dump_value(const json& v, std::string& out) {
  using value_t = json::value_t;
  switch (v.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_value(it.value(), out);
      }
      out += '}';
      return;
    }
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const json& item : v) {
        if (!first) out += ',';
        first = false;
        dump_value(item, out);
      }
      out += ']';
      return;
    }
    case value_t::string:
      out += v.dump();
      return;
    case value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      return;
    case value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      return;
    case value_t::number_float: {
      const double d = v.get<double>();
      if (d == 0.0) {
        // "-0" would parse back as integer 0 and re-dump as "0", so a
        // negative zero must not reach the checksummed bytes.
        out += '0';
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    case value_t::null:
      out += "null";
      return;
    default:
      raise(ErrorKind::Integrity, "unsupported JSON value type");
  }
}

json sparse_to_json(const SparseVector& row) {
  json indices = json::array();
  json values = json::array();
  for (const SparseEntry& e : row.entries) {
    indices.push_back(e.index);
    values.push_back(e.value);
  }
  return json{{"i", std::move(indices)}, {"v", std::move(values)}};
}

SparseVector sparse_from_json(const json& j) {
  SparseVector row;
  const json& indices = j.at("i");
  const json& values = j.at("v");
  if (indices.size() != values.size()) {
    raise(ErrorKind::Integrity, "sparse vector arrays disagree in length");
  }
  row.entries.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    row.entries.push_back(SparseEntry{indices[k].get<std::uint32_t>(),
                                      values[k].get<double>()});
  }
  return row;
}

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (row.size() != cols) {
      raise(ErrorKind::Integrity, "ragged matrix in model payload");
    }
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = row.at(c).get<double>();
  }
  return m;
}

json trees_to_json(const std::vector<Tree>& trees) {
  json out = json::array();
  for (const Tree& tree : trees) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes) {
      nodes.push_back(json{{"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right},
                           {"value", n.value},
                           {"weight", n.weight}});
    }
    out.push_back(json{{"nodes", std::move(nodes)}});
  }
  return out;
}

std::vector<Tree> trees_from_json(const json& j) {
  std::vector<Tree> trees;
  trees.reserve(j.size());
  for (const json& tj : j) {
    Tree tree;
    for (const json& nj : tj.at("nodes")) {
      TreeNode n;
      n.feature = nj.at("feature").get<std::uint32_t>();
      n.threshold = nj.at("threshold").get<double>();
      n.left = nj.at("left").get<std::int32_t>();
      n.right = nj.at("right").get<std::int32_t>();
      n.value = nj.at("value").get<double>();
      n.weight = nj.at("weight").get<double>();
      tree.nodes.push_back(n);
    }
    trees.push_back(std::move(tree));
  }
  return trees;
}

json params_to_json(const ParamMap& params) {
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

ParamMap params_from_json(const json& j) {
  ParamMap out;
  for (const auto& [name, value] : j.items()) {
    if (value.is_number_integer() || value.is_number_unsigned()) {
      out.emplace(name, value.get<std::int64_t>());
    } else if (value.is_number_float()) {
      out.emplace(name, value.get<double>());
    } else if (value.is_string()) {
      out.emplace(name, value.get<std::string>());
    } else {
      raise(ErrorKind::Integrity, "hyperparameter " + name +
                                      " has an unsupported JSON type");
    }
  }
  return out;
}

template <typename T>
json vector_to_json(const std::vector<T>& v) {
  json out = json::array();
  for (const T& item : v) out.push_back(item);
  return out;
}

template <typename T>
std::vector<T> vector_from_json(const json& j) {
  std::vector<T> out;
  out.reserve(j.size());
  for (const json& item : j) out.push_back(item.get<T>());
  return out;
}

json pair_to_json(const std::array<std::vector<double>, 2>& v) {
  return json::array({vector_to_json(v[0]), vector_to_json(v[1])});
}

std::array<std::vector<double>, 2> pair_from_json(const json& j) {
  return {vector_from_json<double>(j.at(0)), vector_from_json<double>(j.at(1))};
}

json payload_of(const ModelState& state);

json voting_member_to_json(const TrainedModel& member) {
  return json{{"hyperparameters", params_to_json(member.spec.params)},
              {"kind", to_string(member.spec.kind)},
              {"metadata",
               json{{"n_train", member.n_train}, {"seed", member.seed}}},
              {"payload", payload_of(member.state)}};
}

json payload_of(const ModelState& state) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantState>) {
          return json{{"state", "constant"}, {"probability", s.probability}};
        } else if constexpr (std::is_same_v<T, MultinomialNbState>) {
          return json{{"state", "multinomial_nb"},
                      {"alpha", s.alpha},
                      {"log_prior", json::array({s.log_prior[0], s.log_prior[1]})},
                      {"log_likelihood", pair_to_json(s.log_likelihood)}};
        } else if constexpr (std::is_same_v<T, BernoulliNbState>) {
          return json{{"state", "bernoulli_nb"},
                      {"alpha", s.alpha},
                      {"log_prior", json::array({s.log_prior[0], s.log_prior[1]})},
                      {"log_theta", pair_to_json(s.log_theta)},
                      {"log_one_minus_theta", pair_to_json(s.log_one_minus_theta)}};
        } else if constexpr (std::is_same_v<T, GaussianNbState>) {
          return json{{"state", "gaussian_nb"},
                      {"columns", vector_to_json(s.columns)},
                      {"log_prior", json::array({s.log_prior[0], s.log_prior[1]})},
                      {"mean", pair_to_json(s.mean)},
                      {"var", pair_to_json(s.var)}};
        } else if constexpr (std::is_same_v<T, LinearState>) {
          return json{{"state", "linear"}, {"w", vector_to_json(s.w)}, {"b", s.b}};
        } else if constexpr (std::is_same_v<T, SmoState>) {
          json support = json::array();
          for (const SparseVector& row : s.support) {
            support.push_back(sparse_to_json(row));
          }
          return json{{"state", "svm"},
                      {"support", std::move(support)},
                      {"coef", vector_to_json(s.coef)},
                      {"b", s.b},
                      {"kernel", to_string(s.kernel)},
                      {"gamma", s.gamma},
                      {"converged", s.converged}};
        } else if constexpr (std::is_same_v<T, DiscriminantState>) {
          json chol = json::array();
          for (const DenseMatrix& m : s.chol) chol.push_back(matrix_to_json(m));
          return json{{"state", "discriminant"},
                      {"quadratic", s.quadratic},
                      {"columns", vector_to_json(s.columns)},
                      {"log_prior", json::array({s.log_prior[0], s.log_prior[1]})},
                      {"mean", pair_to_json(s.mean)},
                      {"chol", std::move(chol)},
                      {"log_det", vector_to_json(s.log_det)}};
        } else if constexpr (std::is_same_v<T, ForestState>) {
          return json{{"state", "forest"}, {"trees", trees_to_json(s.trees)}};
        } else if constexpr (std::is_same_v<T, AdaboostState>) {
          json stumps = json::array();
          for (const AdaboostStump& st : s.stumps) {
            stumps.push_back(json{{"feature", st.feature},
                                  {"threshold", st.threshold},
                                  {"left_vote", st.left_vote},
                                  {"right_vote", st.right_vote},
                                  {"beta", st.beta}});
          }
          return json{{"state", "adaboost"}, {"stumps", std::move(stumps)}};
        } else if constexpr (std::is_same_v<T, GradientBoostState>) {
          json cuts = json::array();
          for (const auto& c : s.cuts) cuts.push_back(vector_to_json(c));
          return json{{"state", "gradient_boost"},
                      {"base_score", s.base_score},
                      {"eta", s.eta},
                      {"trees", trees_to_json(s.trees)},
                      {"binned", s.binned},
                      {"cuts", std::move(cuts)}};
        } else if constexpr (std::is_same_v<T, KnnState>) {
          json rows = json::array();
          for (const SparseVector& row : s.rows) rows.push_back(sparse_to_json(row));
          json labels = json::array();
          for (std::uint8_t label : s.labels) labels.push_back(int(label));
          return json{{"state", "knn"},
                      {"k", s.k},
                      {"distance", to_string(s.distance)},
                      {"labels", std::move(labels)},
                      {"rows", std::move(rows)}};
        } else {
          static_assert(std::is_same_v<T, VotingState>);
          json members = json::array();
          for (const auto& member : s.members) {
            members.push_back(voting_member_to_json(*member));
          }
          return json{{"state", "voting"}, {"members", std::move(members)}};
        }
      },
      state);
}

std::array<double, 2> prior_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

ModelState state_from_json(const json& payload, const std::string& fingerprint,
                           const std::shared_ptr<const FeatureSpace>& space);

std::shared_ptr<const TrainedModel> voting_member_from_json(
    const json& j, const std::string& fingerprint,
    const std::shared_ptr<const FeatureSpace>& space) {
  auto member = std::make_shared<TrainedModel>();
  member->spec = make_spec(parse_model_kind(j.at("kind").get<std::string>()),
                           params_from_json(j.at("hyperparameters")));
  const json& metadata = j.at("metadata");
  member->seed = metadata.at("seed").get<std::uint64_t>();
  member->n_train = metadata.at("n_train").get<std::uint64_t>();
  member->fingerprint = fingerprint;
  member->space = space;
  member->state = state_from_json(j.at("payload"), fingerprint, space);
  return member;
}

ModelState state_from_json(const json& payload, const std::string& fingerprint,
                           const std::shared_ptr<const FeatureSpace>& space) {
  const std::string state = payload.at("state").get<std::string>();
  if (state == "constant") {
    return ConstantState{payload.at("probability").get<double>()};
  }
  if (state == "multinomial_nb") {
    MultinomialNbState s;
    s.alpha = payload.at("alpha").get<double>();
    s.log_prior = prior_from_json(payload.at("log_prior"));
    s.log_likelihood = pair_from_json(payload.at("log_likelihood"));
    return s;
  }
  if (state == "bernoulli_nb") {
    BernoulliNbState s;
    s.alpha = payload.at("alpha").get<double>();
    s.log_prior = prior_from_json(payload.at("log_prior"));
    s.log_theta = pair_from_json(payload.at("log_theta"));
    s.log_one_minus_theta = pair_from_json(payload.at("log_one_minus_theta"));
    return s;
  }
  if (state == "gaussian_nb") {
    GaussianNbState s;
    s.columns = vector_from_json<std::uint32_t>(payload.at("columns"));
    s.log_prior = prior_from_json(payload.at("log_prior"));
    s.mean = pair_from_json(payload.at("mean"));
    s.var = pair_from_json(payload.at("var"));
    return s;
  }
  if (state == "linear") {
    LinearState s;
    s.w = vector_from_json<double>(payload.at("w"));
    s.b = payload.at("b").get<double>();
    return s;
  }
  if (state == "svm") {
    SmoState s;
    for (const json& row : payload.at("support")) {
      s.support.push_back(sparse_from_json(row));
    }
    s.coef = vector_from_json<double>(payload.at("coef"));
    s.b = payload.at("b").get<double>();
    s.kernel = parse_svm_kernel(payload.at("kernel").get<std::string>());
    s.gamma = payload.at("gamma").get<double>();
    s.converged = payload.at("converged").get<bool>();
    return s;
  }
  if (state == "discriminant") {
    DiscriminantState s;
    s.quadratic = payload.at("quadratic").get<bool>();
    s.columns = vector_from_json<std::uint32_t>(payload.at("columns"));
    s.log_prior = prior_from_json(payload.at("log_prior"));
    s.mean = pair_from_json(payload.at("mean"));
    for (const json& m : payload.at("chol")) s.chol.push_back(matrix_from_json(m));
    s.log_det = vector_from_json<double>(payload.at("log_det"));
    return s;
  }
  if (state == "forest") {
    return ForestState{trees_from_json(payload.at("trees"))};
  }
  if (state == "adaboost") {
    AdaboostState s;
    for (const json& sj : payload.at("stumps")) {
      AdaboostStump st;
      st.feature = sj.at("feature").get<std::uint32_t>();
      st.threshold = sj.at("threshold").get<double>();
      st.left_vote = sj.at("left_vote").get<double>();
      st.right_vote = sj.at("right_vote").get<double>();
      st.beta = sj.at("beta").get<double>();
      s.stumps.push_back(st);
    }
    return s;
  }
  if (state == "gradient_boost") {
    GradientBoostState s;
    s.base_score = payload.at("base_score").get<double>();
    s.eta = payload.at("eta").get<double>();
    s.trees = trees_from_json(payload.at("trees"));
    s.binned = payload.at("binned").get<bool>();
    for (const json& c : payload.at("cuts")) {
      s.cuts.push_back(vector_from_json<double>(c));
    }
    return s;
  }
  if (state == "knn") {
    KnnState s;
    s.k = payload.at("k").get<std::int64_t>();
    s.distance = parse_knn_distance(payload.at("distance").get<std::string>());
    for (const json& label : payload.at("labels")) {
      s.labels.push_back(label.get<int>() ? 1 : 0);
    }
    for (const json& row : payload.at("rows")) {
      s.rows.push_back(sparse_from_json(row));
    }
    return s;
  }
  if (state == "voting") {
    VotingState s;
    for (const json& member : payload.at("members")) {
      s.members.push_back(voting_member_from_json(member, fingerprint, space));
    }
    return s;
  }
  raise(ErrorKind::Integrity, "unknown payload state: " + state);
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    raise(ErrorKind::Integrity, "SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string canonical_dump(const json& value) {
  std::string out;
  dump_value(value, out);
  return out;
}

std::string vocabulary_fingerprint(const Vocabulary& vocab,
                                   const IdfModel& idf) {
  json v{{"df", vector_to_json(vocab.df)},
         {"idf", vector_to_json(idf.idf)},
         {"terms", vector_to_json(vocab.terms)}};
  return sha256_hex(canonical_dump(v));
}

void save_model(const TrainedModel& model, const std::string& path) {
  json vocabulary{{"terms", json::array()},
                  {"df", json::array()},
                  {"idf", json::array()},
                  {"n_documents", std::uint64_t{0}}};
  if (model.space) {
    vocabulary["terms"] = vector_to_json(model.space->vocabulary.terms);
    vocabulary["df"] = vector_to_json(model.space->vocabulary.df);
    vocabulary["idf"] = vector_to_json(model.space->idf.idf);
    vocabulary["n_documents"] = model.space->vocabulary.n_documents;
  }
  json payload = payload_of(model.state);
  json envelope{{"format_version", kModelFormatVersion},
                {"kind", to_string(model.spec.kind)},
                {"hyperparameters", params_to_json(model.spec.params)},
                {"vocabulary", std::move(vocabulary)},
                {"fingerprint", model.fingerprint},
                {"metadata",
                 json{{"n_train", model.n_train}, {"seed", model.seed}}},
                {"checksum", sha256_hex(canonical_dump(payload))},
                {"payload", std::move(payload)}};

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::Asset, "cannot open for writing: " + path);
  const std::string text = canonical_dump(envelope);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) raise(ErrorKind::Asset, "failed writing model file: " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Asset, "cannot open model file: " + path);
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};

  json envelope = json::parse(text, nullptr, false);
  if (envelope.is_discarded() || !envelope.is_object()) {
    raise(ErrorKind::Integrity, "model file is not valid JSON: " + path);
  }

  try {
    const json& version = envelope.at("format_version");
    if (!version.is_number_integer() && !version.is_number_unsigned()) {
      raise(ErrorKind::Integrity, "format_version must be an integer");
    }
    const std::int64_t file_version = version.get<std::int64_t>();
    if (file_version > kModelFormatVersion) {
      raise(ErrorKind::Migration,
            "model format_version " + std::to_string(file_version) +
                " is newer than supported version " +
                std::to_string(kModelFormatVersion));
    }
    if (file_version < 1) {
      raise(ErrorKind::Integrity,
            "invalid format_version " + std::to_string(file_version));
    }

    TrainedModel model;
    model.spec =
        make_spec(parse_model_kind(envelope.at("kind").get<std::string>()),
                  params_from_json(envelope.at("hyperparameters")));
    model.fingerprint = envelope.at("fingerprint").get<std::string>();
    const json& metadata = envelope.at("metadata");
    model.seed = metadata.at("seed").get<std::uint64_t>();
    model.n_train = metadata.at("n_train").get<std::uint64_t>();

    const json& vocabulary = envelope.at("vocabulary");
    const json& terms = vocabulary.at("terms");
    if (!terms.empty()) {
      auto space = std::make_shared<FeatureSpace>();
      space->vocabulary.terms = vector_from_json<std::string>(terms);
      space->vocabulary.df =
          vector_from_json<std::uint32_t>(vocabulary.at("df"));
      space->vocabulary.n_documents =
          vocabulary.at("n_documents").get<std::uint64_t>();
      space->idf.idf = vector_from_json<double>(vocabulary.at("idf"));
      for (std::uint32_t i = 0; i < space->vocabulary.terms.size(); ++i) {
        space->vocabulary.index.emplace(space->vocabulary.terms[i], i);
      }
      space->fingerprint = model.fingerprint;
      model.space = std::move(space);
    }

    const json& payload = envelope.at("payload");
    const std::string checksum = envelope.at("checksum").get<std::string>();
    if (sha256_hex(canonical_dump(payload)) != checksum) {
      raise(ErrorKind::Integrity, "payload checksum mismatch: " + path);
    }
    model.state = state_from_json(payload, model.fingerprint, model.space);
    return model;
  } catch (const json::exception& e) {
    raise(ErrorKind::Integrity,
          std::string("malformed model file: ") + e.what());
  }
}

}  // namespace kalkan
