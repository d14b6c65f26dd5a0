#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>

#include "transforma/economy.hpp"
#include "transforma/error.hpp"
#include "transforma/linalg.hpp"
#include "transforma/matrix.hpp"

namespace transforma {

/// Tolerance on the hourly wage value Λ·v around the admissible range [0, 1].
inline constexpr double kWageValueTolerance = 1e-9;

/// Hours of labor embodied per unit of each commodity.
struct LaborValues {
  Vector values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

struct WageStructure {
  double basket_value = 0.0;  // Λ·v, clamped to [0, 1]
  double exploitation = 0.0;  // (1 − Λv)/Λv, +inf when Λv = 0
  std::optional<Vector> shares;  // Λ_i v_i / Λv, absent when Λv = 0

  bool zero_wage() const noexcept { return basket_value == 0.0; }
  bool zero_surplus() const noexcept { return basket_value == 1.0; }
};

/// Per-branch value columns. c(i, j) is the value of commodity i tied up in
/// branch j (materials plus the wage-goods share), surplus[j] the surplus
/// value and output[j] the total value of branch j's product.
struct ValueColumns {
  Matrix c;
  Vector surplus;
  Vector output;

  std::size_t size() const noexcept { return output.size(); }

  /// Committed capital k_j = Σ_i c(i, j).
  Vector capital() const { return column_sums(c); }

  /// Internal profit rate output_j / k_j − 1 of each branch.
  Vector internal_rates() const {
    const Vector k = capital();
    Vector r(size());
    for (std::size_t j = 0; j < size(); ++j) r[j] = output[j] / k[j] - 1.0;
    return r;
  }

  double total_surplus() const { return sum(surplus); }
};

/// Rescales every branch column so its committed capital is one. Applying it
/// to an already normalized table changes nothing.
inline ValueColumns normalize_per_capital(const ValueColumns& t) {
  const Vector k = t.capital();
  ValueColumns out = t;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (!(k[j] > 0.0))
      throw Error(ErrorKind::ZeroCapital,
                  "branch " + std::to_string(j + 1) + " commits no capital per unit of output");
    if (k[j] == 1.0) continue;
    for (std::size_t i = 0; i < t.size(); ++i) out.c(i, j) = t.c(i, j) / k[j];
    out.surplus[j] = t.surplus[j] / k[j];
    out.output[j] = t.output[j] / k[j];
  }
  return out;
}

struct UnitValueTable {
  ValueColumns per_unit;
  Matrix circulating;  // a_ij Λ_i
  Matrix variable;     // Λ_i v_i l_j
  Vector capital;      // k_j
  double total_capital = 0.0;  // Σ_j k_j
  std::optional<ValueColumns> normalized;  // absent when some k_j = 0

  const ValueColumns& per_capital() const {
    if (!normalized)
      throw Error(ErrorKind::ZeroCapital, "a branch commits no capital; per-capital table undefined");
    return *normalized;
  }
};

/// Λ = l·(I − A)⁻¹
inline LaborValues labor_values(const ValidatedEconomy& ve) {
  const Economy& e = ve.economy();
  const Matrix leontief_inverse = invert(Matrix::identity(e.n) - e.technology);
  return {row_times(e.labor, leontief_inverse)};
}

/// Value of the hourly wage basket and the exploitation rate.
inline WageStructure wage_structure(const LaborValues& lambda, std::span<const double> basket) {
  if (basket.size() != lambda.size())
    throw Error(ErrorKind::Dimension, "wage basket length differs from labor values");
  const double raw = dot(lambda.values, basket);
  if (raw > 1.0 + kWageValueTolerance) {
    throw Error(ErrorKind::WageExceedsValue,
                "wage basket is worth " + std::to_string(raw) + " hours per hour of labor (> 1)");
  }
  WageStructure ws;
  ws.basket_value = raw;
  if (std::abs(raw - 1.0) <= kWageValueTolerance) ws.basket_value = 1.0;
  if (raw <= 0.0) ws.basket_value = 0.0;

  if (ws.basket_value == 0.0) {
    ws.exploitation = std::numeric_limits<double>::infinity();
  } else {
    ws.exploitation = (1.0 - ws.basket_value) / ws.basket_value;
    Vector shares(basket.size());
    for (std::size_t i = 0; i < basket.size(); ++i) shares[i] = lambda[i] * basket[i] / raw;
    ws.shares = std::move(shares);
  }
  return ws;
}

/// Per-unit value decomposition of every branch plus its per-capital
/// normalization.
inline UnitValueTable unit_value_table(const ValidatedEconomy& ve, const LaborValues& lambda,
                                       const WageStructure& ws) {
  const Economy& e = ve.economy();
  const std::size_t n = e.n;
  UnitValueTable t;
  t.circulating = Matrix(n, n);
  t.variable = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t.circulating(i, j) = e.technology(i, j) * lambda[i];
      // Λ_i v_i l_j, written through the shares so that Σ_i equals l_j·Λv
      // with Λv already clamped.
      t.variable(i, j) = ws.shares ? (*ws.shares)[i] * ws.basket_value * e.labor[j] : 0.0;
    }
  }
  t.per_unit.c = t.circulating + t.variable;
  t.per_unit.surplus.resize(n);
  for (std::size_t j = 0; j < n; ++j) t.per_unit.surplus[j] = e.labor[j] * (1.0 - ws.basket_value);
  t.per_unit.output = lambda.values;
  t.capital = t.per_unit.capital();
  t.total_capital = sum(t.capital);

  bool all_positive = true;
  for (double k : t.capital) all_positive = all_positive && k > 0.0;
  if (all_positive) t.normalized = normalize_per_capital(t.per_unit);
  return t;
}

}  // namespace transforma
