#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "transforma/economy.hpp"
#include "transforma/error.hpp"
#include "transforma/linalg.hpp"
#include "transforma/matrix.hpp"
#include "transforma/value_system.hpp"

namespace transforma {

struct PriceEigenSystem {
  Matrix share;       // M(j, i) = c_ij / w_j, one row per branch
  double lambda = 0;  // Perron root of M
  double rate = 0;    // uniform profit rate 1/λ − 1
  Vector x_star;      // positive unit eigenvector

  /// ‖M·x* − λx*‖∞
  double eigen_residual() const {
    const Vector mx = share * x_star;
    double r = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) r = std::max(r, std::abs(mx[i] - lambda * x_star[i]));
    return r;
  }
};

/// Input-share matrix M(j, i) = c_ij / w_j. The ratio is scale-free, so
/// per-unit and per-capital columns give the same M.
inline Matrix build_share_matrix(const ValueColumns& t) {
  const std::size_t n = t.size();
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(t.output[j] > 0.0))
      throw Error(ErrorKind::ZeroOutputValue, "branch " + std::to_string(j + 1) + " has zero output value");
    for (std::size_t i = 0; i < n; ++i) m(j, i) = t.c(i, j) / t.output[j];
  }
  return m;
}

inline PriceEigenSystem profit_rate(const Matrix& share, const EigenOptions& options = {}) {
  EigenPair pair = dominant_eigenpair(share, options);
  PriceEigenSystem ps;
  ps.share = share;
  ps.lambda = pair.value;
  ps.rate = 1.0 / pair.value - 1.0;
  ps.x_star = std::move(pair.vector);
  return ps;
}

struct SimilarityReport {
  double max_deviation = 0.0;  // max |M − D⁻¹ A'ᵀ D|
  double lambda_share = std::numeric_limits<double>::quiet_NaN();
  double lambda_augmented = std::numeric_limits<double>::quiet_NaN();
  bool passed = false;
  std::string note;
};

/// Checks M = D_Λ⁻¹ (A + v·lᵀ)ᵀ D_Λ entrywise and compares the Perron roots
/// of M and of the augmented matrix. Failures are reported, never thrown.
inline SimilarityReport augmented_similarity_check(const ValidatedEconomy& ve,
                                                   const LaborValues& lambda, const Matrix& share,
                                                   double tolerance = 1e-9,
                                                   const EigenOptions& options = {}) {
  const Economy& e = ve.economy();
  SimilarityReport report;
  const Matrix augmented = e.technology + outer(e.wage_basket, e.labor);
  Matrix similar(e.n, e.n);
  for (std::size_t j = 0; j < e.n; ++j)
    for (std::size_t i = 0; i < e.n; ++i) similar(j, i) = augmented(i, j) * lambda[i] / lambda[j];
  report.max_deviation = max_abs_difference(share, similar);
  try {
    report.lambda_share = dominant_eigenpair(share, options).value;
    report.lambda_augmented = dominant_eigenpair(augmented, options).value;
  } catch (const Error& err) {
    report.note = err.what();
    return report;
  }
  report.passed = report.max_deviation <= tolerance &&
                  std::abs(report.lambda_share - report.lambda_augmented) <= tolerance;
  return report;
}

}  // namespace transforma
