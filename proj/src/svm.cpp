#include "kalkan/svm.hpp"

#include <algorithm>
#include <cmath>

#include "kalkan/errors.hpp"
#include "kalkan/random.hpp"

namespace kalkan {

namespace {

double kernel_value(SvmKernel kernel, double gamma, const SparseVector& a,
                    const SparseVector& b) {
  const double dot = a.dot(b);
  if (kernel == SvmKernel::linear) return dot;
  const double d2 = a.l2_norm_squared() + b.l2_norm_squared() - 2.0 * dot;
  return std::exp(-gamma * std::max(0.0, d2));
}

double resolve_gamma(const SparseMatrix& x) {
  const std::size_t n = x.n_rows();
  const std::size_t v = x.n_features;
  if (n == 0 || v == 0) return 1.0;
  std::vector<double> sum(v, 0.0), sum_sq(v, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : x.row(i)) {
      sum[e.index] += e.value;
      sum_sq[e.index] += e.value * e.value;
    }
  double total_var = 0.0;
  for (std::size_t f = 0; f < v; ++f) {
    const double mean = sum[f] / static_cast<double>(n);
    total_var += sum_sq[f] / static_cast<double>(n) - mean * mean;
  }
  const double mean_var = total_var / static_cast<double>(v);
  if (!(mean_var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(v) * mean_var);
}

}  // namespace

SvmKernel parse_svm_kernel(const std::string& name) {
  if (name == "linear") return SvmKernel::linear;
  if (name == "rbf") return SvmKernel::rbf;
  raise(ErrorKind::Parameter, "unknown kernel: " + name);
}

std::string to_string(SvmKernel kernel) {
  return kernel == SvmKernel::linear ? "linear" : "rbf";
}

SmoState fit_svm_smo(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                     const SvmConfig& cfg, std::uint64_t seed) {
  if (x.n_rows() != y.size())
    raise(ErrorKind::Shape, "row count does not match label count");
  if (!(cfg.c > 0.0)) raise(ErrorKind::Parameter, "c must be positive");
  if (!(cfg.tol > 0.0)) raise(ErrorKind::Parameter, "tol must be positive");
  if (cfg.max_passes < 1) raise(ErrorKind::Parameter, "max_passes must be at least 1");
  if (cfg.gamma < 0.0) raise(ErrorKind::Parameter, "gamma must be non-negative");

  const std::size_t n = x.n_rows();
  const double c = cfg.c;
  const double gamma =
      cfg.kernel == SvmKernel::rbf && cfg.gamma == 0.0 ? resolve_gamma(x) : cfg.gamma;

  std::vector<double> t(n);  // labels as -1/+1
  for (std::size_t i = 0; i < n; ++i) t[i] = y[i] ? 1.0 : -1.0;

  // Gram precompute keeps the pair updates O(1) per kernel lookup.
  const bool use_gram = n <= 4000;
  std::vector<double> gram;
  if (use_gram) {
    gram.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double kij = kernel_value(cfg.kernel, gamma, x.row(i), x.row(j));
        gram[i * n + j] = kij;
        gram[j * n + i] = kij;
      }
  }
  auto k_at = [&](std::size_t i, std::size_t j) {
    return use_gram ? gram[i * n + j]
                    : kernel_value(cfg.kernel, gamma, x.row(i), x.row(j));
  };

  std::vector<double> alpha(n, 0.0);
  // f_cache[i] = sum_j alpha_j t_j K(i,j) + b, maintained incrementally.
  std::vector<double> f_cache(n, 0.0);
  double b = 0.0;
  SplitMix64 rng(seed);
  bool converged = false;

  for (std::int64_t pass = 0; pass < cfg.max_passes; ++pass) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = f_cache[i] - t[i];
      const bool violates = (t[i] * ei < -cfg.tol && alpha[i] < c) ||
                            (t[i] * ei > cfg.tol && alpha[i] > 0.0);
      if (!violates) continue;

      std::size_t j = static_cast<std::size_t>(rng.next_below(n - 1));
      if (j >= i) ++j;
      const double ej = f_cache[j] - t[j];

      const double ai_old = alpha[i], aj_old = alpha[j];
      double low, high;
      if (t[i] != t[j]) {
        low = std::max(0.0, aj_old - ai_old);
        high = std::min(c, c + aj_old - ai_old);
      } else {
        low = std::max(0.0, ai_old + aj_old - c);
        high = std::min(c, ai_old + aj_old);
      }
      if (low >= high) continue;

      const double kii = k_at(i, i), kjj = k_at(j, j), kij = k_at(i, j);
      const double eta = 2.0 * kij - kii - kjj;
      if (eta >= 0.0) continue;

      double aj = aj_old - t[j] * (ei - ej) / eta;
      aj = std::clamp(aj, low, high);
      if (std::abs(aj - aj_old) < 1e-5) continue;
      const double ai = ai_old + t[i] * t[j] * (aj_old - aj);

      const double b1 = b - ei - t[i] * (ai - ai_old) * kii - t[j] * (aj - aj_old) * kij;
      const double b2 = b - ej - t[i] * (ai - ai_old) * kij - t[j] * (aj - aj_old) * kjj;
      double b_new;
      if (ai > 0.0 && ai < c) {
        b_new = b1;
      } else if (aj > 0.0 && aj < c) {
        b_new = b2;
      } else {
        b_new = 0.5 * (b1 + b2);
      }

      const double di = t[i] * (ai - ai_old), dj = t[j] * (aj - aj_old);
      const double db = b_new - b;
      for (std::size_t kk = 0; kk < n; ++kk)
        f_cache[kk] += di * k_at(i, kk) + dj * k_at(j, kk) + db;

      alpha[i] = ai;
      alpha[j] = aj;
      b = b_new;
      ++changed;
    }
    if (changed == 0) {
      converged = true;
      break;
    }
  }

  SmoState m;
  m.kernel = cfg.kernel;
  m.gamma = gamma;
  m.b = b;
  m.converged = converged;
  for (std::size_t i = 0; i < n; ++i)
    if (alpha[i] > 0.0) {
      m.support.push_back(x.row(i));
      m.coef.push_back(alpha[i] * t[i]);
    }
  return m;
}

double decision_value(const SmoState& m, const SparseVector& row) {
  double f = m.b;
  for (std::size_t s = 0; s < m.support.size(); ++s)
    f += m.coef[s] * kernel_value(m.kernel, m.gamma, m.support[s], row);
  return f;
}

std::vector<double> predict_proba(const SmoState& m, const SparseMatrix& x) {
  std::vector<double> out(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const double f = decision_value(m, x.row(i));
    out[i] = f >= 0.0 ? 1.0 / (1.0 + std::exp(-f))
                      : std::exp(f) / (1.0 + std::exp(f));
  }
  return out;
}

}  // namespace kalkan
