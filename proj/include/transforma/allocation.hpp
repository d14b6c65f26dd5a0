#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transforma/error.hpp"
#include "transforma/linalg.hpp"
#include "transforma/matrix.hpp"
#include "transforma/price_system.hpp"
#include "transforma/value_system.hpp"

namespace transforma {

/// Capital allocation across branches together with the absolute prices it
/// implies. All value quantities are in the units of the scenario's K_T.
struct Allocation {
  Vector capital;             // K_i
  double price_scale = 0.0;   // q*
  Vector price_coefficients;  // x_i = q* x*_i
  Vector output_value;        // W_i = K_i ŵ_i
  Vector output_price;        // P_i = x_i W_i
  Vector surplus_value;       // PL_i = K_i p̂l_i
  Vector profit;              // S_i = P_i − K_p,i
  Vector capital_price;       // K_p,i = Σ_j x_j K_i ĉ_ji
  Matrix inputs;              // inputs(i, j) = K_i ĉ_ji, value of good j advanced by branch i
  double z = 0.0;             // Σ S − Σ PL

  std::size_t size() const noexcept { return capital.size(); }
  double total_capital() const { return sum(capital); }
};

struct AllocationResiduals {
  double capital_sum = 0.0;   // |Σ K − K_T|
  double equality_one = 0.0;  // |Σ S − Σ PL|
  double equality_two = 0.0;  // |Σ K_p − Σ K|
  double reproduction = 0.0;  // max over fully consumed k of |Σ_i K_i ĉ_ki − K_k ŵ_k|
  double min_capital = 0.0;
};

/// Σ p̂l below this fraction of Σ ŵ counts as a zero-surplus economy.
inline constexpr double kZeroSurplusThreshold = 1e-12;

inline bool is_zero_surplus(const ValueColumns& per_capital) {
  return sum(per_capital.surplus) < kZeroSurplusThreshold * sum(per_capital.output);
}

/// One row per fully consumed commodity k: coefficient ĉ_kj for branch j and
/// ĉ_kk − ŵ_k on the diagonal. Each row times K must vanish.
inline Matrix reproduction_rows(const ValueColumns& per_capital,
                                std::span<const std::size_t> fully_consumed) {
  const std::size_t n = per_capital.size();
  Matrix rows(fully_consumed.size(), n);
  for (std::size_t r = 0; r < fully_consumed.size(); ++r) {
    const std::size_t k = fully_consumed[r];
    if (k >= n) throw Error(ErrorKind::Structural, "fully consumed index out of range");
    for (std::size_t j = 0; j < n; ++j) rows(r, j) = per_capital.c(k, j);
    rows(r, k) -= per_capital.output[k];
  }
  return rows;
}

/// Fills every derived field from capitals K and absolute coefficients x.
inline Allocation make_allocation(const ValueColumns& pc, Vector capital, double price_scale,
                                  Vector coefficients) {
  const std::size_t n = pc.size();
  Allocation a;
  a.capital = std::move(capital);
  a.price_scale = price_scale;
  a.price_coefficients = std::move(coefficients);
  a.output_value.resize(n);
  a.output_price.resize(n);
  a.surplus_value.resize(n);
  a.profit.resize(n);
  a.capital_price.resize(n);
  a.inputs = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = a.capital[i];
    a.output_value[i] = k * pc.output[i];
    a.output_price[i] = a.price_coefficients[i] * a.output_value[i];
    a.surplus_value[i] = k * pc.surplus[i];
    double kp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a.inputs(i, j) = k * pc.c(j, i);
      kp += a.price_coefficients[j] * a.inputs(i, j);
    }
    a.capital_price[i] = kp;
    a.profit[i] = a.output_price[i] - kp;
  }
  a.z = sum(a.profit) - sum(a.surplus_value);
  return a;
}

inline AllocationResiduals allocation_residuals(const Allocation& a, const ValueColumns& pc,
                                                double total_capital,
                                                std::span<const std::size_t> fully_consumed) {
  AllocationResiduals r;
  r.capital_sum = std::abs(sum(a.capital) - total_capital);
  r.equality_one = std::abs(sum(a.profit) - sum(a.surplus_value));
  r.equality_two = std::abs(sum(a.capital_price) - sum(a.capital));
  const Vector balance = reproduction_rows(pc, fully_consumed) * a.capital;
  r.reproduction = norm_inf(balance);
  r.min_capital = a.capital.empty() ? 0.0 : *std::min_element(a.capital.begin(), a.capital.end());
  return r;
}

namespace detail {

inline void require_positive(const Allocation& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.capital[i] > 0.0)) {
      throw Error(ErrorKind::NegativeCapital,
                  "branch " + std::to_string(i + 1) + " receives capital " +
                      std::to_string(a.capital[i]) +
                      "; the scenario admits no positive simple-reproduction allocation");
    }
  }
}

inline void check_total_capital(double total_capital) {
  if (!(std::isfinite(total_capital) && total_capital > 0.0))
    throw Error(ErrorKind::NegativeEntry, "total capital must be strictly positive");
}

}  // namespace detail

/// Closed-form allocation for an economy without fixed capital: solves
///   Σ K_i = K_T,  Σ K_i r_i = K_T r,  reproduction rows,
/// with r_i = ŵ_i − 1, then q* = Σ K_i ŵ_i / Σ x*_i K_i ŵ_i.
inline Allocation solve_direct(const ValueColumns& pc, const PriceEigenSystem& ps,
                               double total_capital, std::span<const std::size_t> fully_consumed) {
  const std::size_t n = pc.size();
  detail::check_total_capital(total_capital);
  if (fully_consumed.size() != fully_consumed_count(n))
    throw Error(ErrorKind::Structural, "fully consumed set has the wrong size");
  if (is_zero_surplus(pc))
    throw Error(ErrorKind::NotApplicable, "economy has no surplus value; use the zero-surplus solver");

  Matrix system(n, n);
  Vector rhs(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    system(0, j) = 1.0;
    system(1, j) = pc.output[j] - 1.0;
  }
  rhs[0] = total_capital;
  rhs[1] = total_capital * ps.rate;
  const Matrix repro = reproduction_rows(pc, fully_consumed);
  for (std::size_t r = 0; r < repro.rows(); ++r)
    for (std::size_t j = 0; j < n; ++j) system(r + 2, j) = repro(r, j);

  Vector capital = solve_linear(system, rhs);

  double value = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    value += capital[i] * pc.output[i];
    weighted += ps.x_star[i] * capital[i] * pc.output[i];
  }
  const double q = value / weighted;
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = q * ps.x_star[i];

  Allocation a = make_allocation(pc, std::move(capital), q, std::move(x));
  detail::require_positive(a);
  return a;
}

/// Allocation when no surplus value exists: K is the eigenvalue-one
/// eigenvector of the per-capital input flows (K_j ŵ_j = Σ_i K_i ĉ_ji), scaled
/// to K_T. Prices equal values.
inline Allocation solve_zero_surplus(const ValueColumns& pc, double total_capital,
                                     std::span<const std::size_t> fully_consumed,
                                     const EigenOptions& options = {}) {
  const std::size_t n = pc.size();
  detail::check_total_capital(total_capital);
  if (fully_consumed.size() != fully_consumed_count(n))
    throw Error(ErrorKind::Structural, "fully consumed set has the wrong size");
  if (!is_zero_surplus(pc))
    throw Error(ErrorKind::NotApplicable, "economy has surplus value; use the direct solver");

  Matrix flows(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) flows(j, i) = pc.c(j, i) / pc.output[j];
  const EigenPair pair = dominant_eigenpair(flows, options);
  if (std::abs(pair.value - 1.0) > 1e-9) {
    throw Error(ErrorKind::NotApplicable,
                "input flows have Perron root " + std::to_string(pair.value) + ", expected 1");
  }
  const double scale = total_capital / sum(pair.vector);
  Vector capital(n);
  for (std::size_t i = 0; i < n; ++i) capital[i] = pair.vector[i] * scale;

  Allocation a = make_allocation(pc, std::move(capital), 1.0, Vector(n, 1.0));
  detail::require_positive(a);
  return a;
}

/// Σ_i K_i { q [x*_i (ŵ_i − ĉ_ii) − Σ_{j≠i} x*_j ĉ_ji] − p̂l_i }
inline double z_value(const ValueColumns& pc, std::span<const double> capital, double q,
                      std::span<const double> x_star) {
  const std::size_t n = pc.size();
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double price_margin = x_star[i] * (pc.output[i] - pc.c(i, i));
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) price_margin -= x_star[j] * pc.c(j, i);
    z += capital[i] * (q * price_margin - pc.surplus[i]);
  }
  return z;
}

/// Capitals for a trial scale q: Σ K_i = K_T, Σ K_i ŵ_i (1 − q x*_i) = 0 and
/// the reproduction rows. Entries may be negative.
inline Vector step_capital(const ValueColumns& pc, double q, std::span<const double> x_star,
                           double total_capital, std::span<const std::size_t> fully_consumed) {
  const std::size_t n = pc.size();
  if (n < 2) throw Error(ErrorKind::Dimension, "the capital step needs at least 2 branches");
  if (fully_consumed.size() != fully_consumed_count(n))
    throw Error(ErrorKind::Structural, "fully consumed set has the wrong size");
  Matrix system(n, n);
  Vector rhs(n, 0.0);
  rhs[0] = total_capital;
  for (std::size_t j = 0; j < n; ++j) {
    system(0, j) = 1.0;
    system(1, j) = pc.output[j] * (1.0 - q * x_star[j]);
  }
  const Matrix repro = reproduction_rows(pc, fully_consumed);
  for (std::size_t r = 0; r < repro.rows(); ++r)
    for (std::size_t j = 0; j < n; ++j) system(r + 2, j) = repro(r, j);
  return solve_linear(system, rhs);
}

struct IterativeOptions {
  std::optional<double> step;  // Δq; default from default_scan_step
  int zooms = 6;
  std::size_t max_scan_steps = 1000000;
};

struct ZSample {
  double q = 0.0;
  double z = 0.0;
};

struct IterativeTrace {
  std::vector<ZSample> scan;  // coarse grid from q = 0 to the first descending sign change
  double initial_step = 0.0;
  double final_step = 0.0;
  double root_residual = 0.0;  // |z| at the interpolated q*
  std::size_t discontinuities = 0;  // brackets rejected as poles of the capital step
};

/// A-priori scale estimate: q̂/100 with q̂ = Σ ŵ / Σ x*_i ŵ_i (uniform capitals).
inline double default_scan_step(const ValueColumns& pc, std::span<const double> x_star) {
  return sum(pc.output) / dot(x_star, pc.output) / 100.0;
}

/// Alternating capital step / z step scan over q = 0, Δq, 2Δq, ... At the
/// first descending sign change of z the bracket is re-scanned with a ten
/// times finer step `zooms` times, and q* is fixed by linear interpolation.
inline Allocation solve_iterative(const ValueColumns& pc, const PriceEigenSystem& ps,
                                  double total_capital, std::span<const std::size_t> fully_consumed,
                                  const IterativeOptions& options = {},
                                  IterativeTrace* trace = nullptr) {
  const std::size_t n = pc.size();
  detail::check_total_capital(total_capital);
  if (is_zero_surplus(pc))
    throw Error(ErrorKind::NotApplicable,
                "z vanishes identically without surplus value; use the zero-surplus solver");
  if (options.zooms < 1) throw Error(ErrorKind::Dimension, "zooms must be at least 1");
  const std::span<const double> x_star = ps.x_star;
  const double min_x = *std::min_element(x_star.begin(), x_star.end());
  if (!(min_x > 0.0))
    throw Error(ErrorKind::NotApplicable, "price eigenvector has non-positive entries");

  const double dq = options.step.value_or(default_scan_step(pc, x_star));
  if (!(dq > 0.0)) throw Error(ErrorKind::Dimension, "scan step must be positive");
  const double q_max = 10.0 * sum(pc.output) / min_x;

  IterativeTrace local;
  IterativeTrace& tr = trace ? *trace : local;
  tr = IterativeTrace{};
  tr.initial_step = dq;

  auto z_at = [&](double q) -> std::optional<double> {
    try {
      const Vector k = step_capital(pc, q, x_star, total_capital, fully_consumed);
      return z_value(pc, k, q, x_star);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::Singular) return std::nullopt;
      throw;
    }
  };

  // Zooms into [a, b] (z(a) > 0 >= z(b)) and interpolates. Returns nullopt if
  // the bracket straddles a pole of the capital step instead of a root.
  auto refine = [&](double a, double b, double za, double zb) -> std::optional<double> {
    const double coarse_scale = std::min(std::abs(za), std::abs(zb));
    double h = b - a;
    for (int level = 0; level < options.zooms; ++level) {
      h /= 10.0;
      double lo = a, zlo = za;
      for (int k = 1; k <= 10; ++k) {
        const double qk = (k == 10) ? b : a + k * h;
        const auto zk = z_at(qk);
        if (!zk) continue;
        if (*zk <= 0.0) {
          a = lo;
          za = zlo;
          b = qk;
          zb = *zk;
          break;
        }
        lo = qk;
        zlo = *zk;
      }
    }
    const double root = (zb == 0.0) ? b : a - za * (b - a) / (zb - za);
    const auto zr = z_at(root);
    if (!zr) return std::nullopt;
    if (std::abs(*zr) > std::max(0.5 * coarse_scale, 1e-9 * total_capital)) return std::nullopt;
    tr.final_step = h;
    tr.root_residual = std::abs(*zr);
    return root;
  };

  double q = 0.0;
  std::optional<double> z = z_at(q);
  if (z) tr.scan.push_back({q, *z});
  for (std::size_t step = 1; step <= options.max_scan_steps; ++step) {
    const double next_q = static_cast<double>(step) * dq;
    if (next_q > q_max) break;
    const std::optional<double> next_z = z_at(next_q);
    if (next_z) tr.scan.push_back({next_q, *next_z});
    if (z && next_z && *z > 0.0 && *next_z <= 0.0) {
      if (const auto root = refine(q, next_q, *z, *next_z)) {
        const Vector capital = step_capital(pc, *root, x_star, total_capital, fully_consumed);
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = *root * x_star[i];
        Allocation a = make_allocation(pc, capital, *root, std::move(x));
        detail::require_positive(a);
        return a;
      }
      ++tr.discontinuities;
    }
    q = next_q;
    z = next_z;
  }
  throw Error(ErrorKind::NoRoot, "z has no descending zero crossing below q_max = " + std::to_string(q_max));
}

}  // namespace transforma
