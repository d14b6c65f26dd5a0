// Acceptance run: one PASS/FAIL line per criterion, details indented below
// failing lines. Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace transforma;

namespace {

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }

  void near_abs(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << got << ", want " << want << " +- " << tol;
    expect(std::abs(got - want) <= tol, os.str());
  }

  void near_rel(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << got << ", want " << want << " (relative " << tol << ")";
    expect(fixture::rel(got, want) <= tol, os.str());
  }

  void at_most(double got, double bound, const std::string& what) {
    std::ostringstream os;
    os.precision(6);
    os << what << ": " << got << " > " << bound;
    expect(got <= bound, os.str());
  }

  void note(const std::string& text) { notes_.push_back(text); }

  bool passed() const { return failures_.empty(); }

  void print() const {
    std::printf("[%s] %s (%zu checks)\n", passed() ? "PASS" : "FAIL", name_.c_str(), checks_);
    const std::size_t shown = std::min<std::size_t>(failures_.size(), 12);
    for (std::size_t i = 0; i < shown; ++i) std::printf("       %s\n", failures_[i].c_str());
    if (failures_.size() > shown) std::printf("       ... %zu more\n", failures_.size() - shown);
    for (const auto& n : notes_) std::printf("       note: %s\n", n.c_str());
  }

 private:
  std::string name_;
  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

void guarded(Criterion& c, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& err) {
    c.expect(false, std::string("unexpected exception: ") + err.what());
  }
}

std::string idx(const char* name, std::size_t i) { return std::string(name) + "[" + std::to_string(i + 1) + "]"; }

Criterion reference_values() {
  Criterion c("1 reference economy: labor values, wage value, exploitation rate, profit rate");
  guarded(c, [&] {
    const Solution s = fixture::solve("first_case.scn");
    const Vector lambda{0.181818, 1.81818, 0.909091};
    for (std::size_t i = 0; i < 3; ++i) c.near_abs(s.labor[i], lambda[i], 1e-5, idx("Lambda", i));
    c.near_abs(s.wages.basket_value, 0.515152, 1e-5, "Lambda.v");
    c.near_abs(s.wages.exploitation, 0.941176, 1e-5, "e");
    c.near_abs(s.prices.rate, 0.185374125, 1e-8, "r");
  });
  return c;
}

Criterion reference_allocation() {
  Criterion c("2 reference economy: capital allocation, prices and both aggregate equalities");
  guarded(c, [&] {
    const Solution s = fixture::solve("first_case.scn");
    const Allocation& a = s.allocation;
    const Vector k{1.317239, 0.548274, 0.504703}, x{1.078519, 1.001526, 0.830341},
        kp{1.341601, 0.546518, 0.482098}, unit{0.196094, 1.820957, 0.754855};
    for (std::size_t i = 0; i < 3; ++i) {
      c.near_rel(a.capital[i], k[i], 1e-3, idx("K", i));
      c.near_rel(a.price_coefficients[i], x[i], 1e-3, idx("x", i));
      c.near_rel(a.capital_price[i], kp[i], 1e-3, idx("Kp", i));
      c.near_rel(a.price_coefficients[i] * s.labor[i], unit[i], 1e-3, idx("unit price", i));
    }
    c.near_rel(sum(a.profit), 0.43938, 1e-3, "sum S");
    c.near_rel(sum(a.surplus_value), 0.43938, 1e-3, "sum PL");
    c.at_most(s.residuals.equality_one, 1e-8, "equality I residual");
    c.at_most(s.residuals.equality_two, 1e-8, "equality II residual");
    c.at_most(s.residuals.capital_sum, 1e-8, "capital sum residual");
    c.at_most(s.residuals.reproduction, 1e-8, "reproduction residual");
    c.at_most(s.prices.eigen_residual(), 1e-8, "eigen residual");
  });
  return c;
}

Criterion reference_quantities() {
  Criterion c("3 reference economy: augmented values, gross and net outputs");
  guarded(c, [&] {
    const Solution s = fixture::solve("first_case.scn");
    c.expect(s.augmented_values.has_value(), "augmented values missing");
    if (!s.augmented_values) return;
    const Vector lp{0.3745, 3.750, 1.875}, y{1.65202, 0.0, 0.152911}, g{8.1098, 0.35576, 0.757054};
    for (std::size_t i = 0; i < 3; ++i) {
      c.near_abs((*s.augmented_values)[i], lp[i], 1e-3, idx("Lambda'", i));
      c.near_rel(s.quantities.gross[i], g[i], 1e-3, idx("g", i));
      if (i != 1) c.near_rel(s.quantities.net[i], y[i], 1e-3, idx("y", i));
      c.near_abs(s.labor[i] * s.quantities.gross[i], s.allocation.output_value[i], 1e-8, idx("w g - W", i));
    }
    c.near_abs(s.quantities.net[1], 0.0, 1e-8, "y[2]");
    c.note("reference Lambda'[1] = 0.3745; computed 3/8 = 0.375 lies within the 1e-3 tolerance");
  });
  return c;
}

Criterion zero_wage_case() {
  Criterion c("4 zero-wage economy: maximal profit rate and its allocation");
  guarded(c, [&] {
    const Solution s = fixture::solve("zero_wage.scn");
    c.near_abs(s.prices.rate, 0.482537152, 1e-8, "r");
    const Vector k{1.074833, 0.417832, 0.304997}, x{1.229694, 1.006855, 0.526843};
    for (std::size_t i = 0; i < 3; ++i) {
      c.near_rel(s.allocation.capital[i], k[i], 1e-3, idx("K", i));
      c.near_rel(s.allocation.price_coefficients[i], x[i], 1e-3, idx("x", i));
      c.expect(s.table.per_unit.surplus[i] == s.economy.labor[i], idx("pl == l", i));
    }
  });
  return c;
}

Criterion zero_surplus_cases() {
  Criterion c("5 zero-surplus economies: prices equal values, capital conserved");
  guarded(c, [&] {
    struct Case {
      const char* file;
      Vector capital;
    };
    // Case (b) is compared with its value-table totals. The same source lists
    // K = (1.674296926, 0.699949132, 0.534844851) beside those totals
    // (1.674022738, 0.699893011, 0.53517516): the two disagree in the fourth
    // digit, and only the totals satisfy the balance conditions.
    const Case cases[] = {{"max_meat.scn", {1.134082, 0.589379, 1.185631}},
                          {"max_wheat.scn", {1.674022738, 0.699893011, 0.53517516}}};
    for (const Case& cs : cases) {
      const Solution s = fixture::solve(cs.file);
      const std::string tag = std::string(cs.file) + " ";
      c.expect(s.solver == SolverUsed::ZeroSurplus, tag + "not routed to the zero-surplus solver");
      c.near_abs(s.prices.rate, 0.0, 1e-10, tag + "r");
      for (std::size_t i = 0; i < 3; ++i) {
        c.near_abs(s.allocation.price_coefficients[i], 1.0, 1e-10, tag + idx("x", i));
        c.near_rel(s.allocation.capital[i], cs.capital[i], 1e-3, tag + idx("K", i));
      }
      c.near_abs(sum(s.allocation.capital), 2.90909, 1e-10, tag + "sum K");
      c.near_abs(sum(s.allocation.capital_price), 2.90909, 1e-10, tag + "sum Kp");
    }
    c.note("zero-surplus case (b): reference K column and value-table totals differ in the 4th digit; "
           "compared against the totals");
  });
  return c;
}

Criterion cross_solver() {
  Criterion c("6 direct and iterative solvers agree on q*, K and x");
  guarded(c, [&] {
    SolveOptions both;
    both.solver = SolverChoice::Both;
    for (const char* file : {"first_case.scn", "zero_wage.scn"}) {
      const Solution s = fixture::solve(file, both);
      c.at_most(*s.cross_solver_deviation, 1e-6, std::string(file) + " relative gap");
    }
    const auto ve = validate(fixture::load("first_case.scn"));
    const SweepSpec spec =
        parse_sweep_spec(read_text_file(fixture::scenario_path("iso_value_wheat_meat.sweep")));
    for (std::size_t k = 0; k < spec.samples; ++k) {
      Economy e = ve.economy();
      const SweepRow row = sweep_sample(e, labor_values(ve), spec, k, {});
      if (row.status != "ok") continue;
      e.wage_basket = row.basket;
      e.exact.reset();
      const Solution s = solve(validate(e), both);
      c.at_most(*s.cross_solver_deviation, 1e-6, "iso-value sample " + std::to_string(k) + " relative gap");
    }
  });
  return c;
}

Criterion property_suite() {
  Criterion c("7 randomized economies n = 2..5, 200 seeds each: equalities, reproduction, similarity, "
              "z monotone with one sign change, homothety");
  std::size_t z_failures = 0, draws = 0, rejected = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " ";
      guarded(c, [&] {
        const oracle::FeasibleDraw d = oracle::feasible_economy(n, seed);
        ++draws;
        rejected += static_cast<std::size_t>(d.rejected);
        const Solution& s = d.solution;
        const double kt = s.total_capital;
        c.at_most(s.residuals.equality_one, 1e-8 * kt, tag + "equality I");
        c.at_most(s.residuals.equality_two, 1e-8 * kt, tag + "equality II");
        c.at_most(s.residuals.reproduction, 1e-8, tag + "reproduction");

        const double lambda_aug = dominant_eigenpair(s.augmented).value;
        c.near_abs(s.prices.lambda, lambda_aug, 1e-9, tag + "lambda(M) vs lambda(A')");

        IterativeTrace trace;
        const auto& pc = s.table.per_capital();
        bool z_ok = true;
        try {
          solve_iterative(pc, s.prices, kt, s.economy.fully_consumed, {}, &trace);
        } catch (const Error& err) {
          c.expect(false, tag + "iterative solver: " + err.what());
          z_ok = false;
        }
        std::size_t sign_changes = 0;
        bool monotone = true;
        for (std::size_t k = 1; k < trace.scan.size(); ++k) {
          if (trace.scan[k].z > trace.scan[k - 1].z) monotone = false;
          if ((trace.scan[k].z > 0.0) != (trace.scan[k - 1].z > 0.0)) ++sign_changes;
        }
        c.expect(monotone, tag + "z increases somewhere on the scan grid (" +
                               std::to_string(trace.discontinuities) + " pole bracket(s) rejected)");
        c.expect(sign_changes == 1, tag + "z changes sign " + std::to_string(sign_changes) + " times");
        if (!monotone || sign_changes != 1 || !z_ok) ++z_failures;

        SolveOptions scaled;
        scaled.normalize_to = 7.5 * kt;
        const Solution big = solve(validate(d.economy), scaled);
        c.at_most(relative_gap(big.allocation.price_scale, s.allocation.price_scale), 1e-10, tag + "q* homothety");
        c.at_most(std::abs(big.prices.rate - s.prices.rate), 1e-10, tag + "r homothety");
        for (std::size_t i = 0; i < n; ++i)
          c.at_most(relative_gap(big.allocation.price_coefficients[i], s.allocation.price_coefficients[i]), 1e-10,
                    tag + idx("x homothety", i));
      });
    }
  }
  c.note(std::to_string(draws) + " feasible economies, " + std::to_string(rejected) +
         " draws rejected (negative capital or negative net output)");
  c.note(std::to_string(z_failures) + " economies violate the z monotonicity / single sign change property");
  return c;
}

Criterion oracle_equivalence() {
  Criterion c("8 labor values match fixed-point iteration; Perron roots match characteristic polynomial");
  guarded(c, [&] {
    std::mt19937_64 rng(2024);
    for (std::size_t n = 2; n <= 6; ++n) {
      for (int trial = 0; trial < 40; ++trial) {
        const Economy e = oracle::random_economy(n, rng);
        const LaborValues lambda = labor_values(validate(e));
        const Vector ref = oracle::fixed_point_labor_values(e.technology, e.labor, 500);
        c.at_most(max_abs_difference(lambda.values, ref), 1e-8, "labor values n=" + std::to_string(n));
        if (n <= 4) {
          const Matrix ap = augmented_matrix(e);
          c.near_abs(dominant_eigenpair(ap).value, oracle::largest_characteristic_root(ap), 1e-8,
                     "Perron root of A' n=" + std::to_string(n));
          const ValidatedEconomy ve = validate(e);
          const UnitValueTable t = unit_value_table(ve, lambda, wage_structure(lambda, ve->wage_basket));
          const Matrix share = build_share_matrix(t.per_capital());
          c.near_abs(dominant_eigenpair(share).value, oracle::largest_characteristic_root(share), 1e-8,
                     "Perron root of M n=" + std::to_string(n));
        }
      }
    }
    const Solution ref = fixture::solve("first_case.scn");
    c.near_abs(ref.prices.lambda, oracle::largest_characteristic_root(ref.prices.share), 1e-8,
               "reference Perron root");
  });
  return c;
}

Criterion iso_value_sweep() {
  Criterion c("9 iso-value basket family: exploitation rate fixed, profit rate varies");
  guarded(c, [&] {
    const auto ve = validate(fixture::load("first_case.scn"));
    const SweepSpec spec =
        parse_sweep_spec(read_text_file(fixture::scenario_path("iso_value_wheat_meat.sweep")));
    const SweepResult r = run_sweep(ve, spec);
    c.expect(r.rows.size() == 21, "expected 21 samples, got " + std::to_string(r.rows.size()));
    bool through_base = false;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& row : r.rows) {
      c.expect(row.status == "ok", "sample " + std::to_string(row.index) + " status " + row.status);
      if (std::abs(row.parameter) < 1e-12) through_base = max_abs_difference(row.basket, ve->wage_basket) < 1e-9;
      if (row.status != "ok") continue;
      lo = std::min(lo, row.rate);
      hi = std::max(hi, row.rate);
    }
    c.expect(through_base, "family does not pass through the reference basket");
    c.expect(r.exploitation_spread.has_value(), "no exploitation spread recorded");
    if (r.exploitation_spread) c.at_most(*r.exploitation_spread, 1e-9, "spread of e");
    c.expect(hi - lo > 0.0, "profit rate does not vary");
    std::ostringstream os;
    os << "r ranges over [" << lo << ", " << hi << "]";
    c.note(os.str());
  });
  return c;
}

}  // namespace

int main() {
  const std::vector<std::function<Criterion()>> criteria{
      reference_values, reference_allocation, reference_quantities, zero_wage_case, zero_surplus_cases,
      cross_solver,     property_suite,       oracle_equivalence,   iso_value_sweep};
  int failed = 0;
  for (const auto& run : criteria) {
    const Criterion c = run();
    c.print();
    failed += c.passed() ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
