#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transforma/allocation.hpp"
#include "transforma/economy.hpp"
#include "transforma/price_system.hpp"
#include "transforma/quantity_system.hpp"
#include "transforma/value_system.hpp"

namespace transforma {

enum class SolverChoice { Direct, Iterative, Both };
enum class SolverUsed { Direct, Iterative, ZeroSurplus };

constexpr std::string_view to_string(SolverUsed s) {
  switch (s) {
    case SolverUsed::Direct: return "direct";
    case SolverUsed::Iterative: return "iterative";
    case SolverUsed::ZeroSurplus: return "zero-surplus";
  }
  return "unknown";
}

struct SolveOptions {
  SolverChoice solver = SolverChoice::Direct;
  std::optional<double> normalize_to;  // overrides the scenario's K_T
  IterativeOptions iterative;
  EigenOptions eigen;
};

struct Solution {
  Economy economy;
  LaborValues labor;
  WageStructure wages;
  UnitValueTable table;
  PriceEigenSystem prices;
  double total_capital = 0.0;
  SolverUsed solver = SolverUsed::Direct;
  Allocation allocation;
  std::optional<Allocation> iterative;          // second solution when both solvers ran
  std::optional<double> cross_solver_deviation;  // max relative gap on q*, K, x
  AllocationResiduals residuals;
  Matrix augmented;
  std::optional<Vector> augmented_values;
  Outputs quantities;
  std::vector<std::string> notices;
};

inline double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

/// Max relative deviation between two allocations on q*, K and x.
inline double allocation_gap(const Allocation& a, const Allocation& b) {
  double gap = relative_gap(a.price_scale, b.price_scale);
  for (std::size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, relative_gap(a.capital[i], b.capital[i]));
    gap = std::max(gap, relative_gap(a.price_coefficients[i], b.price_coefficients[i]));
  }
  return gap;
}

/// validate → labor values → wages → value table → share matrix → profit
/// rate → allocation → quantities.
inline Solution solve(const ValidatedEconomy& ve, const SolveOptions& options = {}) {
  const Economy& e = ve.economy();
  Solution s;
  s.economy = e;
  s.notices = ve.warnings();
  s.labor = labor_values(ve);
  s.wages = wage_structure(s.labor, e.wage_basket);
  s.table = unit_value_table(ve, s.labor, s.wages);
  const ValueColumns& pc = s.table.per_capital();
  s.prices = profit_rate(build_share_matrix(pc), options.eigen);

  s.total_capital = options.normalize_to.value_or(e.total_capital.value_or(s.table.total_capital));

  if (is_zero_surplus(pc)) {
    if (options.solver != SolverChoice::Direct)
      s.notices.emplace_back("no surplus value: the iterative solver does not apply");
    s.notices.emplace_back("no surplus value: routed to the zero-surplus solver (prices equal values)");
    s.solver = SolverUsed::ZeroSurplus;
    s.allocation = solve_zero_surplus(pc, s.total_capital, e.fully_consumed, options.eigen);
  } else if (options.solver == SolverChoice::Iterative) {
    s.solver = SolverUsed::Iterative;
    s.allocation = solve_iterative(pc, s.prices, s.total_capital, e.fully_consumed, options.iterative);
  } else {
    s.solver = SolverUsed::Direct;
    s.allocation = solve_direct(pc, s.prices, s.total_capital, e.fully_consumed);
    if (options.solver == SolverChoice::Both) {
      s.iterative = solve_iterative(pc, s.prices, s.total_capital, e.fully_consumed, options.iterative);
      s.cross_solver_deviation = allocation_gap(s.allocation, *s.iterative);
    }
  }

  s.residuals = allocation_residuals(s.allocation, pc, s.total_capital, e.fully_consumed);
  s.augmented = augmented_matrix(e);
  if (!s.wages.zero_surplus()) {
    try {
      s.augmented_values = augmented_values(e, s.augmented);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::Singular) throw;
      s.notices.emplace_back("I - A' is singular; augmented values undefined");
    }
  }
  s.quantities = outputs(s.allocation, s.labor, s.augmented);
  return s;
}

/// Default residual tolerance, overridable through TRANSFORMA_TOL.
inline double residual_tolerance() {
  if (const char* env = std::getenv("TRANSFORMA_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
  }
  return 1e-8;
}

/// Relative tolerance for agreement between the direct and iterative solvers.
inline constexpr double kCrossSolverTolerance = 1e-6;

struct CheckItem {
  std::string name;
  double observed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct CheckReport {
  std::vector<CheckItem> items;
  std::vector<std::string> notices;

  bool passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
  }
};

/// Runs every solver that applies and measures every invariant. Pipeline
/// errors are recorded as failed items.
inline CheckReport run_checks(const ValidatedEconomy& ve, double tol = residual_tolerance()) {
  CheckReport report;
  auto add = [&](std::string name, double observed, double tolerance, std::string note = {}) {
    const bool ok = std::isfinite(observed) && observed <= tolerance;
    report.items.push_back({std::move(name), observed, tolerance, ok, std::move(note)});
  };
  auto fail = [&](std::string name, const std::string& why) {
    report.items.push_back({std::move(name), std::nan(""), 0.0, false, why});
  };

  Solution s;
  try {
    s = solve(ve);
  } catch (const Error& err) {
    fail("pipeline", std::string(to_string(err.kind())) + ": " + err.what());
    return report;
  }
  report.notices = s.notices;
  report.notices.push_back("solver: " + std::string(to_string(s.solver)));

  const double kt = s.total_capital;
  const ValueColumns& pc = s.table.per_capital();
  const Allocation& a = s.allocation;
  const auto& fc = s.economy.fully_consumed;

  add("eigen residual |Mx* - lambda x*|", s.prices.eigen_residual(), tol);
  const SimilarityReport sim = augmented_similarity_check(ve, s.labor, s.prices.share, tol);
  add("similarity M ~ (A + v l)^T", sim.max_deviation, tol, sim.note);
  add("Perron roots lambda(M) vs lambda(A')", std::abs(sim.lambda_share - sim.lambda_augmented), tol);
  add("capital sum |sum K - K_T|", s.residuals.capital_sum, tol * kt);
  add("equality I |sum S - sum PL|", s.residuals.equality_one, tol * kt);
  add("equality II |sum Kp - sum K|", s.residuals.equality_two, tol * kt);
  add("reproduction rows", s.residuals.reproduction, tol * kt);
  add("positive capitals (-min K)", -s.residuals.min_capital, 0.0);

  const Outputs& q = s.quantities;
  const double gscale = 1.0 + norm_inf(q.gross);
  add("net output formulas agree", q.max_deviation, tol * gscale);
  double fc_net = 0.0, negative_net = 0.0, value_gap = 0.0;
  for (std::size_t j = 0; j < s.economy.n; ++j) {
    if (s.economy.is_fully_consumed(j)) fc_net = std::max(fc_net, std::abs(q.net[j]));
    else negative_net = std::max(negative_net, -q.net[j]);
    value_gap = std::max(value_gap, std::abs(s.labor[j] * q.gross[j] - a.output_value[j]));
  }
  add("fully consumed net output y_k = 0", fc_net, tol * gscale);
  add("net output of other branches >= 0 (-min y)", negative_net, tol * gscale);
  add("w_i g_i = W_i", value_gap, tol * kt);

  if (s.solver == SolverUsed::ZeroSurplus) {
    double gap = 0.0;
    for (double x : a.price_coefficients) gap = std::max(gap, std::abs(x - 1.0));
    add("prices equal values |x - 1|", gap, tol);
  } else {
    const Vector rates = pc.internal_rates();
    const double eq3 = std::abs(dot(a.capital, rates) - kt * s.prices.rate);
    add("sum K_i r_i = K_T r", eq3, tol * kt);
    add("sum K_i r_i - K_T r matches z", std::abs(eq3 - std::abs(a.z)), tol * kt);
    try {
      const Allocation it = solve_iterative(pc, s.prices, kt, fc);
      add("direct vs iterative (relative)", allocation_gap(a, it), kCrossSolverTolerance);
    } catch (const Error& err) {
      fail("direct vs iterative (relative)", std::string(to_string(err.kind())) + ": " + err.what());
    }
  }
  return report;
}

}  // namespace transforma
