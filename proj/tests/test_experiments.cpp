#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "dnc/experiments.hpp"
#include "dnc/parallel.hpp"
#include "dnc/verify.hpp"

using namespace dnc;

TEST(Spearman, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{2, 4, 6, 8, 100};
  const std::vector<double> down{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman(x, up), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, down), -1.0, 1e-15);
  // Ties get average ranks: y ranks (1.5, 1.5, 3, 4, 5).
  const std::vector<double> tied{0, 0, 1, 2, 3};
  EXPECT_NEAR(spearman(x, tied), 9.5 / std::sqrt(10.0 * 9.5), 1e-12);
  const std::vector<double> flat{1, 1, 1, 1, 1};
  EXPECT_EQ(spearman(x, flat), 0.0);
}

TEST(CrossoverPoint, FirstNFromWhichDividerStaysAhead) {
  auto row = [](std::size_t n, double d, double c) {
    CrossoverRow r;
    r.n = n;
    r.divider_per_good = d;
    r.chooser_per_good = c;
    return r;
  };
  EXPECT_EQ(crossover_point({row(2, 0.1, 0.2), row(5, 0.3, 0.2), row(8, 0.1, 0.2), row(10, 0.3, 0.2)}), 10u);
  EXPECT_FALSE(crossover_point({row(2, 0.1, 0.2), row(5, 0.1, 0.3)}).has_value());
}

TEST(Crossover, UniformTwoGoodsNearClosedForm) {
  ExperimentConfig c;
  c.seed = 3;
  c.trials = 2000;
  c.family = PriorFamily::uniform01;
  c.n_values = {2};
  const auto row = crossover_experiment(c).front();
  EXPECT_NEAR(row.divider_per_good, 19.0 / 72.0, 0.01);
  // The chooser's share is capped by E max(x1/2, x1/2 + x2)/2 = 0.375.
  EXPECT_LT(row.chooser_per_good, 0.375);
  EXPECT_EQ(row.below_baseline_trials, 0u);
}

TEST(Crossover, ReproducibleAcrossThreadCounts) {
  ExperimentConfig c;
  c.seed = 9;
  c.trials = 20;
  c.n_values = {2, 5};
  set_thread_count(1);
  const auto a = crossover_experiment(c);
  set_thread_count(4);
  const auto b = crossover_experiment(c);
  set_thread_count(0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].divider_per_good, b[k].divider_per_good);
    EXPECT_EQ(a[k].chooser_per_good, b[k].chooser_per_good);
  }
  std::ostringstream os;
  write_crossover_csv(os, a);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "n,trials,divider_per_good,chooser_per_good,difference_stderr,mean_pile1_probability");
}

TEST(Crossover, ChooserAheadForFewGoodsDividerForMany) {
  ExperimentConfig c;
  c.seed = 4;
  c.trials = 100;
  c.n_values = {2, 30};
  const auto rows = crossover_experiment(c);
  EXPECT_GT(rows[0].chooser_per_good, rows[0].divider_per_good);
  EXPECT_GT(rows[1].divider_per_good, rows[1].chooser_per_good);
}

TEST(Crossover, UniformLargeNUsesMonteCarlo) {
  ExperimentConfig c;
  c.seed = 5;
  c.trials = 5;
  c.family = PriorFamily::uniform01;
  c.n_values = {6};
  c.mc_samples = 5000;
  const auto row = crossover_experiment(c).front();
  EXPECT_GT(row.divider_per_good, 0.25);
  EXPECT_LT(row.divider_per_good, 0.375);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c;
  c.trials = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c.trials = 1;
  c.n_values = {};
  EXPECT_THROW(c.validate(), DomainError);
  c.n_values = {2};
  c.stdev = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(RoleStudy, SortedByDeviationAndSeeded) {
  ExperimentConfig c;
  c.seed = 6;
  c.trials = 30;
  c.ensemble = 40;
  c.n_values = {4};
  const auto a = deviation_role_experiment(c);
  const auto b = deviation_role_experiment(c);
  ASSERT_EQ(a.rows.size(), 30u);
  for (std::size_t k = 1; k < a.rows.size(); ++k) EXPECT_LE(a.rows[k - 1].deviation, a.rows[k].deviation);
  EXPECT_EQ(a.rank_correlation, b.rank_correlation);
  EXPECT_GE(a.rank_correlation, -1.0);
  EXPECT_LE(a.rank_correlation, 1.0);
  std::ostringstream os;
  write_role_csv(os, a);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "deviation,divider_utility,chooser_utility,better_role,ensemble,values");
}

TEST(RoleStudy, ChooserSideAtLeastHalfTotal) {
  ExperimentConfig c;
  c.n_values = {3};
  const std::vector<Division> ensemble{Division({1.0, 0.0, 0.5}), Division::even(3)};
  const std::vector<double> v{1.0, 2.0, 3.0};
  const auto row = evaluate_role(c, v, ensemble);
  // max(2.5, 3.5) and 3 averaged.
  EXPECT_NEAR(row.chooser_utility, 3.25, 1e-12);
  EXPECT_GE(row.divider_utility, 3.0 - 1e-12);
}

TEST(Diversification, AverseSplitsAtLeastAsMuchOnAverage) {
  ExperimentConfig c;
  c.seed = 7;
  c.trials = 8;
  c.n_values = {2};
  c.resolution = 0.02;
  const auto rows = diversification_experiment(c);
  ASSERT_EQ(rows.size(), 8u);
  std::ostringstream os;
  write_diversification_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "trial,divider_values,p_neutral,p_averse,split_neutral,split_averse");
  c.n_values = {5};
  EXPECT_THROW(diversification_experiment(c), CapacityError);
}

TEST(Localization, CertifiesThreeGoodInstance) {
  const auto inst = instances::not_monotone();
  NormalSolveConfig cfg;
  cfg.gamma = 1e-4 * abs_sum(inst.divider_values);
  const auto rep = solve_normal(inst, cfg);
  const auto cert = localize_incumbent(inst, rep.division, 0.05);
  EXPECT_TRUE(cert.certified);
  EXPECT_EQ(cert.bounds.size(), 6u);
  for (const auto& b : cert.bounds) EXPECT_LT(b.bound, cert.incumbent_utility);
}

TEST(Localization, CertifiesSixGoodInstance) {
  const auto inst = instances::split_five();
  NormalSolveConfig cfg;
  cfg.gamma = 1e-3 * abs_sum(inst.divider_values);
  const auto rep = solve_normal(inst, cfg);
  EXPECT_TRUE(localize_incumbent(inst, rep.division, 0.05).certified);
}

TEST(Localization, FlatLandscapeNotCertified) {
  const Instance inst = instances::normal({2.0, 4.0}, {{1.0, 0.3}, {2.0, 0.5}});
  const auto cert = localize_incumbent(inst, Division::even(2), 0.05);
  EXPECT_FALSE(cert.certified);
}

TEST(Localization, InputChecks) {
  const auto inst = instances::not_monotone();
  EXPECT_THROW(localize_incumbent(inst, Division::even(3), 0.0), DomainError);
  EXPECT_THROW(localize_incumbent(inst, Division::even(2), 0.1), DomainError);
  EXPECT_THROW(localize_incumbent(Instance{{1, 1}, Uniform01Prior{2}}, Division::even(2), 0.1), DomainError);
}
