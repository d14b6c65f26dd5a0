#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transforma/error.hpp"
#include "transforma/linalg.hpp"
#include "transforma/matrix.hpp"
#include "transforma/rational.hpp"

namespace transforma {

/// Scenario inputs as written, when every number was an exact rational.
struct ExactInputs {
  DenseMatrix<Rational> technology;
  std::vector<Rational> labor;
  std::vector<Rational> wage_basket;
  std::optional<Rational> total_capital;

  friend bool operator==(const ExactInputs&, const ExactInputs&) = default;
};

/// Input data of an n-branch simple-reproduction economy.
///
/// technology(i, j) is the number of units of commodity i used per unit of
/// commodity j. labor[j] is hours per unit of j. wage_basket[i] is the units
/// of commodity i a worker obtains per hour of labor.
struct Economy {
  std::size_t n = 0;
  Matrix technology;
  Vector labor;
  Vector wage_basket;
  std::optional<double> total_capital;  // nullopt: committed capital for one unit of each good
  std::vector<std::size_t> fully_consumed;  // zero-based, sorted
  std::vector<std::string> labels;
  bool allow_zero_labor = false;
  std::optional<ExactInputs> exact;

  std::string label(std::size_t i) const {
    if (i < labels.size() && !labels[i].empty()) return labels[i];
    return "Branch " + std::to_string(i + 1);
  }

  bool is_fully_consumed(std::size_t i) const {
    return std::binary_search(fully_consumed.begin(), fully_consumed.end(), i);
  }
};

/// Required cardinality of the fully-consumed set for n branches.
constexpr std::size_t fully_consumed_count(std::size_t n) noexcept { return n >= 2 ? n - 2 : 0; }

/// An Economy that passed validate(). Solver entry points take this type.
class ValidatedEconomy {
 public:
  const Economy& economy() const noexcept { return economy_; }
  const Economy* operator->() const noexcept { return &economy_; }
  const Vector& hawkins_simon_minors() const noexcept { return minors_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  friend ValidatedEconomy validate(Economy e);
  ValidatedEconomy(Economy e, Vector minors, std::vector<std::string> warnings)
      : economy_(std::move(e)), minors_(std::move(minors)), warnings_(std::move(warnings)) {}

  Economy economy_;
  Vector minors_;
  std::vector<std::string> warnings_;
};

/// True when the directed graph with an edge i -> j for every nonzero
/// m(i, j) is strongly connected.
inline bool is_irreducible(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n <= 1) return true;
  auto reaches_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        const double entry = transpose ? m(w, u) : m(u, w);
        if (entry != 0.0 && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reaches_all(false) && reaches_all(true);
}

namespace detail {

inline void check_structure(const Economy& e) {
  if (e.n < 2) throw Error(ErrorKind::Structural, "an economy needs at least 2 branches");
  if (e.technology.rows() != e.n || e.technology.cols() != e.n)
    throw Error(ErrorKind::Dimension, "technology matrix must be " + std::to_string(e.n) + "x" +
                                          std::to_string(e.n));
  if (e.labor.size() != e.n)
    throw Error(ErrorKind::Dimension, "labor vector must have " + std::to_string(e.n) + " entries");
  if (e.wage_basket.size() != e.n)
    throw Error(ErrorKind::Dimension, "wage basket must have " + std::to_string(e.n) + " entries");
  if (!e.labels.empty() && e.labels.size() != e.n)
    throw Error(ErrorKind::Dimension, "labels must have " + std::to_string(e.n) + " entries");

  const std::size_t want = fully_consumed_count(e.n);
  if (e.fully_consumed.size() != want)
    throw Error(ErrorKind::Structural, "fully_consumed must list exactly " + std::to_string(want) +
                                           " branch(es), got " +
                                           std::to_string(e.fully_consumed.size()));
  for (std::size_t k = 0; k < e.fully_consumed.size(); ++k) {
    if (e.fully_consumed[k] >= e.n)
      throw Error(ErrorKind::Structural,
                  "fully_consumed index " + std::to_string(e.fully_consumed[k] + 1) + " out of range");
    if (k > 0 && e.fully_consumed[k] <= e.fully_consumed[k - 1])
      throw Error(ErrorKind::Structural, "fully_consumed must be sorted and distinct");
  }
}

inline void check_entries(const Economy& e) {
  auto check = [](double x, const std::string& where) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NegativeEntry, "non-finite entry in " + where);
    if (x < 0.0) throw Error(ErrorKind::NegativeEntry, "negative entry in " + where);
  };
  for (std::size_t i = 0; i < e.n; ++i)
    for (std::size_t j = 0; j < e.n; ++j)
      check(e.technology(i, j),
            "A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
  for (std::size_t i = 0; i < e.n; ++i) check(e.labor[i], "l[" + std::to_string(i + 1) + "]");
  for (std::size_t i = 0; i < e.n; ++i) check(e.wage_basket[i], "v[" + std::to_string(i + 1) + "]");
  if (e.total_capital && !(std::isfinite(*e.total_capital) && *e.total_capital > 0.0))
    throw Error(ErrorKind::NegativeEntry, "K_T must be strictly positive");
}

}  // namespace detail

/// Checks structure, entry signs, the Hawkins-Simon condition on (I - A) and
/// labor positivity. A reducible augmented matrix A + v·lᵀ produces a
/// warning, not an error.
inline ValidatedEconomy validate(Economy e) {
  detail::check_structure(e);
  detail::check_entries(e);

  const Matrix leontief = Matrix::identity(e.n) - e.technology;
  Vector minors = leading_principal_minors(leontief);
  for (std::size_t k = 0; k < minors.size(); ++k) {
    if (!(minors[k] > 0.0)) throw NonProductiveError(k + 1, minors[k]);
  }

  if (!e.allow_zero_labor) {
    for (std::size_t j = 0; j < e.n; ++j) {
      if (e.labor[j] == 0.0)
        throw Error(ErrorKind::Structural, "branch " + std::to_string(j + 1) +
                                               " uses no labor (set allow_zero_labor to permit)");
    }
  }

  std::vector<std::string> warnings;
  const Matrix augmented = e.technology + outer(e.wage_basket, e.labor);
  if (!is_irreducible(augmented)) {
    warnings.emplace_back(
        "augmented matrix A + v*l is reducible; the Perron eigenvector may have zero entries");
  }
  return ValidatedEconomy(std::move(e), std::move(minors), std::move(warnings));
}

}  // namespace transforma
