#pragma once

#include <cmath>
#include <cstddef>

#include "transforma/allocation.hpp"
#include "transforma/economy.hpp"
#include "transforma/linalg.hpp"
#include "transforma/matrix.hpp"
#include "transforma/value_system.hpp"

namespace transforma {

/// a'_ij = a_ij + v_i l_j: technical coefficients with workers' consumption
/// folded in.
inline Matrix augmented_matrix(const Economy& e) {
  return e.technology + outer(e.wage_basket, e.labor);
}

/// Λ' = l·(I − A')⁻¹. Throws Singular for zero-surplus economies, where the
/// spectral radius of A' is one.
inline Vector augmented_values(const Economy& e, const Matrix& augmented) {
  return row_times(e.labor, invert(Matrix::identity(e.n) - augmented));
}

struct Outputs {
  Vector gross;            // g_i = W_i / Λ_i
  Vector net;              // y = g − A'·g
  Vector net_from_values;  // (W_j − Σ_i K_i ĉ_ji) / Λ_j
  double max_deviation = 0.0;
};

/// Physical gross and net outputs implied by an allocation, by both routes.
inline Outputs outputs(const Allocation& a, const LaborValues& lambda, const Matrix& augmented) {
  const std::size_t n = a.size();
  Outputs out;
  out.gross.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.gross[i] = a.output_value[i] / lambda[i];
  const Vector used = augmented * out.gross;
  out.net.resize(n);
  out.net_from_values.resize(n);
  const Vector consumed = column_sums(a.inputs);
  for (std::size_t j = 0; j < n; ++j) {
    out.net[j] = out.gross[j] - used[j];
    out.net_from_values[j] = (a.output_value[j] - consumed[j]) / lambda[j];
  }
  out.max_deviation = max_abs_difference(out.net, out.net_from_values);
  return out;
}

}  // namespace transforma
