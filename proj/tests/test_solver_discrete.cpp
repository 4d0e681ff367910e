#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dnc/oracle.hpp"
#include "dnc/parallel.hpp"
#include "dnc/solver_discrete.hpp"
#include "dnc/verify.hpp"

using namespace dnc;

TEST(SolveDiscrete, FourTypeInstance) {
  const Instance inst{{2.0, 1.0}, instances::two_by_two()};
  const auto rep = solve_discrete(inst);
  EXPECT_NEAR(rep.divider_utility, 1.75, 1e-12);
  EXPECT_EQ(rep.division, Division({1.0, 0.0}));
  EXPECT_NEAR(rep.pile1_probability, 0.25, 1e-12);
  EXPECT_NEAR(*rep.chooser_utility, 1.75, 1e-12);
  EXPECT_EQ(rep.method, SolveMethod::discrete_exact);
  EXPECT_EQ(*rep.gap_bound, 0.0);
}

TEST(SolveDiscrete, KnownChooserType) {
  // One type (1, 2): the divider keeps P = 0 and extracts as much as the
  // chooser's indifference allows: q = (1, -1/2).
  JointDiscretePrior prior;
  prior.types = {{{1.0, 2.0}, 1.0}};
  const auto rep = solve_discrete(std::vector<double>{2.0, 1.0}, prior);
  EXPECT_NEAR(rep.divider_utility, 2.25, 1e-12);
  EXPECT_NEAR(rep.division[0], 1.0, 1e-12);
  EXPECT_NEAR(rep.division[1], 0.25, 1e-12);
  EXPECT_EQ(rep.pile1_probability, 0.0);
}

TEST(SolveDiscrete, PerGoodPriorIsFlattened) {
  // Four two-point goods flatten to 16 types.
  DiscretePerGoodPrior prior;
  prior.goods.assign(4, {{0.01, 0.6}, {1.0, 0.4}});
  const Instance inst{std::vector<double>(4, 1.0), prior};
  const auto rep = solve_discrete(inst);
  const auto joint = solve_discrete(Instance{inst.divider_values, flatten_to_joint(prior)});
  EXPECT_EQ(rep.divider_utility, joint.divider_utility);
  EXPECT_GE(rep.divider_utility, rep.baseline_divider - 1e-12);
  // Five goods give 32 types, past the cap.
  EXPECT_THROW(solve_discrete(instances::symmetry_breaking()), CapacityError);
}

TEST(SolveDiscrete, MatchesGridOracleProperty) {
  Rng rng(41);
  for (int t = 0; t < 25; ++t) {
    const auto inst = gen::random_joint_instance(rng, 2, 5);
    const auto exact = solve_discrete(inst);
    const auto grid = grid_best_response(inst, 0.01);
    EXPECT_GE(exact.divider_utility, grid.divider_utility - 1e-9);
    EXPECT_LE(exact.divider_utility, grid.divider_utility + *grid.gap_bound);
    EXPECT_GE(exact.divider_utility, exact.baseline_divider - 1e-12);
  }
}

TEST(SolveDiscrete, DeterministicAcrossThreadCounts) {
  Rng rng(42);
  const auto inst = gen::random_joint_instance(rng, 3, 6);
  set_thread_count(1);
  const auto a = solve_discrete(inst);
  set_thread_count(4);
  const auto b = solve_discrete(inst);
  set_thread_count(0);
  EXPECT_EQ(a.division, b.division);
  EXPECT_EQ(a.divider_utility, b.divider_utility);
}

TEST(SolveDiscrete, CapacityAndDomainErrors) {
  JointDiscretePrior thirty;
  for (int k = 0; k < 30; ++k) thirty.types.push_back({{static_cast<double>(k), 1.0}, 1.0 / 30.0});
  EXPECT_THROW(solve_discrete(std::vector<double>{1.0, 1.0}, thirty), CapacityError);
  EXPECT_THROW(solve_discrete(Instance{{1.0, 1.0}, NormalPrior{{{1, 1}, {1, 1}}}}), DomainError);
  EXPECT_THROW(solve_discrete(std::vector<double>{1.0}, instances::two_by_two()), DomainError);
}

TEST(SolveDiscrete, ReportsLpCount) {
  const Instance inst{{2.0, 1.0}, instances::two_by_two()};
  const auto rep = solve_discrete(inst);
  // Subsets of mass <= 1/2 among four types of mass 1/4: 1 + 4 + 6.
  EXPECT_EQ(rep.iterations, 11u);
}
