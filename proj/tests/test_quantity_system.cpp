#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace transforma;

TEST(AugmentedMatrix, ReferenceEconomy) {
  const Economy e = fixture::load("first_case.scn");
  const Matrix ap = augmented_matrix(e);
  const Matrix reference{{0.49333, 3.71429, 1.5}, {0.02666, 0.285714, 0.05}, {0.02666, 0.380952, 0.333333}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(ap(i, j), reference(i, j), 1e-4) << i << "," << j;
}

TEST(AugmentedMatrix, ZeroWageLeavesTechnologyAndValuesUnchanged) {
  const Economy e = fixture::load("zero_wage.scn");
  const Matrix ap = augmented_matrix(e);
  EXPECT_EQ(ap, e.technology);
  const Vector lp = augmented_values(e, ap);
  EXPECT_LE(max_abs_difference(lp, labor_values(validate(e)).values), 1e-15);
}

TEST(AugmentedMatrix, WagePartHasRankOne) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const Economy e = oracle::random_economy(3 + trial % 3, rng);
    const Matrix wage_part = augmented_matrix(e) - e.technology;
    // Every 2x2 minor of an outer product vanishes.
    for (std::size_t i = 0; i + 1 < e.n; ++i)
      for (std::size_t j = 0; j + 1 < e.n; ++j)
        EXPECT_NEAR(wage_part(i, j) * wage_part(i + 1, j + 1) - wage_part(i, j + 1) * wage_part(i + 1, j), 0.0,
                    1e-15);
  }
}

TEST(AugmentedValues, ReferenceEconomy) {
  const Solution s = fixture::solve("first_case.scn");
  ASSERT_TRUE(s.augmented_values.has_value());
  // The reference first entry is 0.3745; the exact value is 3/8.
  const Vector reference{0.3745, 3.750, 1.875};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR((*s.augmented_values)[i], reference[i], 1e-3);
  EXPECT_NEAR((*s.augmented_values)[0], 0.375, 1e-12);
}

TEST(AugmentedValues, SingularWhenThereIsNoSurplus) {
  const Economy e = fixture::load("max_meat.scn");
  const Matrix ap = augmented_matrix(e);
  try {
    augmented_values(e, ap);
    FAIL() << "expected Singular";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::Singular);
  }
  EXPECT_NEAR(dominant_eigenpair(ap).value, 1.0, 1e-10);
  const Solution s = fixture::solve("max_meat.scn");
  EXPECT_FALSE(s.augmented_values.has_value());
}

TEST(Outputs, ReferenceEconomy) {
  const Solution s = fixture::solve("first_case.scn");
  const Vector g_pub{8.1098, 0.35576, 0.757054};
  const Vector y_pub{1.65202, 0.0, 0.152911};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(fixture::rel(s.quantities.gross[i], g_pub[i]), 1e-3) << i;
  EXPECT_LE(fixture::rel(s.quantities.net[0], y_pub[0]), 1e-3);
  EXPECT_LE(fixture::rel(s.quantities.net[2], y_pub[2]), 1e-3);
  EXPECT_NEAR(s.quantities.net[1], 0.0, 1e-8);
  EXPECT_LE(s.quantities.max_deviation, 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(s.labor[i] * s.quantities.gross[i], s.allocation.output_value[i], 1e-12);
}

TEST(Outputs, FullyConsumedBranchesHaveZeroNetOutput) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const oracle::FeasibleDraw d = oracle::feasible_economy(3 + seed % 3, seed);
    const Solution& s = d.solution;
    const double scale = 1.0 + norm_inf(s.quantities.gross);
    for (std::size_t k : s.economy.fully_consumed) EXPECT_NEAR(s.quantities.net[k], 0.0, 1e-9 * scale);
    EXPECT_LE(s.quantities.max_deviation, 1e-9 * scale);
  }
}

TEST(Outputs, DoublingCapitalDoublesQuantities) {
  const Solution base = fixture::solve("first_case.scn");
  SolveOptions opts;
  opts.normalize_to = 2.0 * base.total_capital;
  const Solution twice = fixture::solve("first_case.scn", opts);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(twice.quantities.gross[i], 2.0 * base.quantities.gross[i], 1e-12);
    EXPECT_NEAR(twice.quantities.net[i], 2.0 * base.quantities.net[i], 1e-12);
  }
}
