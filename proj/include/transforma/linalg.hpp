#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "transforma/error.hpp"
#include "transforma/matrix.hpp"

namespace transforma {

/// Pivots smaller than this fraction of the largest initial entry are treated
/// as zero.
inline constexpr double kPivotThreshold = 1e-12;

/// LU factorization with partial pivoting, P·A = L·U packed into one matrix.
template <typename T>
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (!lu_.square()) throw Error(ErrorKind::Dimension, "LU of a non-square matrix");
    const std::size_t n = lu_.rows();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    T scale{};
    for (const T& x : lu_.data()) scale = std::max<T>(scale, std::abs(x));
    const T threshold = static_cast<T>(kPivotThreshold) * scale;

    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      T best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        if (std::abs(lu_(i, k)) > best) {
          best = std::abs(lu_(i, k));
          p = i;
        }
      }
      if (!(best > threshold)) {
        throw Error(ErrorKind::Singular, "singular matrix: pivot " + std::to_string(double(best)) +
                                             " at column " + std::to_string(k));
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        sign_ = -sign_;
      }
      const T pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const T factor = lu_(i, k) / pivot;
        lu_(i, k) = factor;
        if (factor == T{}) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  std::vector<T> solve(std::span<const T> b) const {
    const std::size_t n = size();
    if (b.size() != n) throw Error(ErrorKind::Dimension, "right-hand side length mismatch");
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      T acc = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
      x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
      T acc = x[i];
      for (std::size_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
      x[i] = acc / lu_(i, i);
    }
    return x;
  }

  T determinant() const {
    T det = static_cast<T>(sign_);
    for (std::size_t i = 0; i < size(); ++i) det *= lu_(i, i);
    return det;
  }

 private:
  DenseMatrix<T> lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

/// Solves A·x = b by Gaussian elimination with partial pivoting.
/// Throws Singular when a pivot falls below the relative threshold.
inline Vector solve_linear(const Matrix& a, std::span<const double> b) {
  if (!a.square()) throw Error(ErrorKind::Dimension, "solve_linear needs a square matrix");
  if (a.rows() == 0) return {};
  return LuFactorization<double>(a).solve(b);
}

inline Matrix invert(const Matrix& a) {
  if (!a.square()) throw Error(ErrorKind::Dimension, "invert needs a square matrix");
  const std::size_t n = a.rows();
  LuFactorization<double> lu(a);
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = lu.solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

/// Determinant by elimination; returns 0 for exactly singular input instead of
/// throwing.
template <typename T>
T determinant(DenseMatrix<T> a) {
  if (!a.square()) throw Error(ErrorKind::Dimension, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  T det{1};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == T{}) return T{};
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const T factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return det;
}

/// Leading principal minors of orders 1..n.
inline Vector leading_principal_minors(const Matrix& a) {
  if (!a.square()) throw Error(ErrorKind::Dimension, "minors of a non-square matrix");
  Vector minors;
  minors.reserve(a.rows());
  for (std::size_t k = 1; k <= a.rows(); ++k) {
    Matrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(i, j);
    minors.push_back(determinant(std::move(sub)));
  }
  return minors;
}

struct EigenOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 100000;
};

struct EigenPair {
  double value = 0.0;
  Vector vector;  // unit 2-norm
  std::size_t iterations = 0;
};

/// Perron root and eigenvector of a nonnegative square matrix by power
/// iteration from the all-ones vector.
///
/// Stops when successive Rayleigh quotients differ by less than the tolerance
/// and the eigen residual ‖Mx − λx‖∞ is within tolerance·max(1, λ). The
/// returned vector has unit 2-norm and its largest-magnitude entry is
/// positive.
inline EigenPair dominant_eigenpair(const Matrix& m, const EigenOptions& options = {}) {
  if (!m.square() || m.rows() == 0)
    throw Error(ErrorKind::Dimension, "dominant_eigenpair needs a non-empty square matrix");
  if (!(options.tolerance > 0.0)) throw Error(ErrorKind::Dimension, "tolerance must be positive");
  for (double x : m.data()) {
    if (!std::isfinite(x) || x < 0.0)
      throw Error(ErrorKind::NegativeEntry, "dominant_eigenpair needs a finite nonnegative matrix");
  }
  if (max_abs_entry(m) == 0.0) throw Error(ErrorKind::ZeroMatrix, "matrix is identically zero");

  const std::size_t n = m.rows();
  Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double previous = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    Vector y = m * x;
    const double lambda = dot(x, y);
    const double ny = norm2(y);
    if (ny == 0.0) {
      throw Error(ErrorKind::NoConvergence, "power iterate vanished (nilpotent matrix)");
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(y[i] - lambda * x[i]));

    if (std::abs(lambda - previous) < options.tolerance &&
        residual <= options.tolerance * std::max(1.0, std::abs(lambda))) {
      std::size_t big = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[big])) big = i;
      if (x[big] < 0.0)
        for (double& xi : x) xi = -xi;
      return {lambda, std::move(x), it};
    }
    previous = lambda;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  throw Error(ErrorKind::NoConvergence,
              "power iteration did not converge in " + std::to_string(options.max_iterations) +
                  " iterations");
}

}  // namespace transforma
