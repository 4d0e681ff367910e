#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dnc/rng.hpp"
#include "dnc/simplex.hpp"

using namespace dnc;

TEST(Simplex, TextbookMaximum) {
  LinearProgram lp;
  lp.objective = {1.0, 1.0};
  lp.lower = {0.0, 0.0};
  lp.upper = {10.0, 10.0};
  lp.add_row({1.0, 2.0}, 4.0);
  lp.add_row({3.0, 1.0}, 6.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, 2.8, 1e-12);
  EXPECT_NEAR(sol.x[0], 1.6, 1e-12);
  EXPECT_NEAR(sol.x[1], 1.2, 1e-12);
}

TEST(Simplex, NegativeLowerBoundsAndRhs) {
  // max x - y on [-1,1]^2 with x + y <= -0.5.
  LinearProgram lp;
  lp.objective = {1.0, -1.0};
  lp.lower = {-1.0, -1.0};
  lp.upper = {1.0, 1.0};
  lp.add_row({1.0, 1.0}, -0.5);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, 1.5, 1e-12);
}

TEST(Simplex, DetectsInfeasibility) {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.lower = {0.0};
  lp.upper = {1.0};
  lp.add_row({-1.0}, -2.0);  // x >= 2
  EXPECT_EQ(solve_lp(lp).status, LpStatus::infeasible);
}

TEST(Simplex, DegenerateVertex) {
  // Three constraints through the optimum (1,1).
  LinearProgram lp;
  lp.objective = {1.0, 1.0};
  lp.lower = {0.0, 0.0};
  lp.upper = {5.0, 5.0};
  lp.add_row({1.0, 0.0}, 1.0);
  lp.add_row({0.0, 1.0}, 1.0);
  lp.add_row({1.0, 1.0}, 2.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.value, 2.0, 1e-12);
}

TEST(Simplex, MatchesGridSearchProperty) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    LinearProgram lp;
    lp.objective = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    lp.lower = {-1.0, -1.0};
    lp.upper = {1.0, 1.0};
    for (int r = 0; r < 3; ++r) lp.add_row({2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0}, rng.uniform() - 0.3);
    const auto sol = solve_lp(lp);
    const int m = 400;
    double best = -INFINITY;
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        const double x = -1.0 + 2.0 * i / m, y = -1.0 + 2.0 * j / m;
        bool ok = true;
        for (std::size_t r = 0; r < lp.rows.size(); ++r) ok = ok && lp.rows[r][0] * x + lp.rows[r][1] * y <= lp.rhs[r];
        if (ok) best = std::max(best, lp.objective[0] * x + lp.objective[1] * y);
      }
    }
    if (sol.status == LpStatus::infeasible) {
      EXPECT_EQ(best, -INFINITY);
      continue;
    }
    ASSERT_EQ(sol.status, LpStatus::optimal);
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
      EXPECT_LE(lp.rows[r][0] * sol.x[0] + lp.rows[r][1] * sol.x[1], lp.rhs[r] + 1e-9);
    }
    EXPECT_GE(sol.value, best - 1e-12);
    if (best > -INFINITY) EXPECT_LE(sol.value, best + 0.02);
  }
}
