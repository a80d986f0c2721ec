#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kalkan/sparse.hpp"

namespace kalkan {

enum class SvmKernel { linear, rbf };

struct SvmConfig {
  double c = 1.0;
  SvmKernel kernel = SvmKernel::rbf;
  double gamma = 0.0;  // 0 = 1 / (n_features * mean feature variance), guarded to 1
  double tol = 1e-3;
  std::int64_t max_passes = 1000;
};

// Dual solution kept as the support rows and their alpha_i * y_i.
struct SmoState {
  std::vector<SparseVector> support;
  std::vector<double> coef;  // alpha_i * y_i per support row
  double b = 0.0;
  SvmKernel kernel = SvmKernel::rbf;
  double gamma = 1.0;  // resolved value, unused for linear
  bool converged = true;
};

// Simplified sequential minimal optimization: sweep the samples, pair each
// KKT violator (beyond tol) with a random partner and solve the 2-variable
// subproblem analytically. Stops after a sweep with no updates or max_passes
// sweeps; hitting the cap sets converged = false rather than raising. The
// full Gram matrix is precomputed when n <= 4000.
SmoState fit_svm_smo(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                     const SvmConfig& cfg, std::uint64_t seed);

SvmKernel parse_svm_kernel(const std::string& name);
std::string to_string(SvmKernel kernel);

double decision_value(const SmoState& m, const SparseVector& row);

// sigmoid(decision); uncalibrated but sign-consistent.
std::vector<double> predict_proba(const SmoState& m, const SparseMatrix& x);

}  // namespace kalkan
