#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "dnc/normal_dist.hpp"
#include "dnc/priors.hpp"
#include "dnc/rng.hpp"

using namespace dnc;

TEST(NormalDist, FrozenCdfValues) {
  EXPECT_NEAR(std_normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(std_normal_cdf(1.0), 0.8413447460685429, 1e-15);
  EXPECT_NEAR(std_normal_cdf(-3.0), 0.0013498980316300946, 1e-16);
  EXPECT_NEAR(std_normal_cdf(-10.0), 7.61985302416047e-24, 1e-36);
}

TEST(NormalDist, QuantileInvertsCdfProperty) {
  for (double e = -300; e < 0.0; e += 0.37) {
    const double p = std::pow(10.0, e / 20.0);
    const double z = std_normal_quantile(p);
    EXPECT_NEAR(std_normal_cdf(z) / p, 1.0, 1e-12) << "p=" << p;
  }
  EXPECT_NEAR(std_normal_quantile(0.975), 1.959963984540054, 1e-12);
}

TEST(NormalPrior, PileOneProbabilityMatchesSampling) {
  const PriorSpec prior = NormalPrior{{{1.0, 0.5}, {2.0, 1.0}, {0.5, 0.2}}};
  const std::vector<double> q{1.0, -0.4, 0.7};
  const double P = pile1_probability(prior, q);
  Rng rng(11);
  const int samples = 200000;
  int hits = 0;
  for (int k = 0; k < samples; ++k) {
    const auto x = sample_values(prior, rng);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += q[i] * x[i];
    hits += s > 0.0 ? 1 : 0;
  }
  const double est = static_cast<double>(hits) / samples;
  EXPECT_NEAR(P, est, 4.0 * std::sqrt(P * (1 - P) / samples));
}

TEST(NormalPrior, ChooserUtilityMatchesSampling) {
  const PriorSpec prior = NormalPrior{{{1.0, 0.5}, {2.0, 1.0}}};
  const Division d({0.8, 0.3});
  const double closed = chooser_expected_utility(prior, d);
  Rng rng(12);
  const int samples = 200000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto x = sample_values(prior, rng);
    const double v1 = 0.8 * x[0] + 0.3 * x[1], v2 = 0.2 * x[0] + 0.7 * x[1];
    const double b = std::max(v1, v2);
    sum += b;
    sq += b * b;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sq / samples - mean * mean) / samples);
  EXPECT_NEAR(closed, mean, 4.0 * se);
}

TEST(Priors, ZeroQNeverPicksPileOne) {
  const std::vector<double> q{0.0, 0.0};
  EXPECT_EQ(pile1_probability(NormalPrior{{{1, 1}, {1, 1}}}, q), 0.0);
  EXPECT_EQ(pile1_probability(Uniform01Prior{2}, q), 0.0);
}

TEST(Priors, ScalingAndReflectionInvarianceProperty) {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    NormalPrior prior;
    std::vector<double> q(3);
    for (int i = 0; i < 3; ++i) {
      prior.goods.push_back({3.0 * rng.uniform() - 1.0, 0.1 + rng.uniform()});
      q[i] = 2.0 * rng.uniform() - 1.0;
    }
    const double P = pile1_probability(prior, q);
    auto scaled = q, negated = q;
    const double c = 0.01 + rng.uniform();
    for (auto& v : scaled) v *= c;
    for (auto& v : negated) v = -v;
    EXPECT_NEAR(pile1_probability(prior, scaled), P, 1e-13);
    EXPECT_NEAR(pile1_probability(prior, negated), 1.0 - P, 1e-13);
  }
}

namespace {

// Brute-force enumeration of the 32 atoms of the five-good two-point prior.
double enumerate_pile2(const std::vector<double>& p) {
  double pile2 = 0.0;
  for (int mask = 0; mask < 32; ++mask) {
    double prob = 1.0, v1 = 0.0, v2 = 0.0;
    for (int i = 0; i < 5; ++i) {
      const bool high = mask >> i & 1;
      const double x = high ? 1.0 : 0.01;
      prob *= high ? 0.4 : 0.6;
      v1 += p[i] * x;
      v2 += (1.0 - p[i]) * x;
    }
    if (!(v1 > v2)) pile2 += prob;
  }
  return pile2;
}

}  // namespace

TEST(DiscretePerGood, SymmetryBreakingInstance) {
  DiscretePerGoodPrior prior;
  prior.goods.assign(5, {{0.01, 0.6}, {1.0, 0.4}});
  const std::vector<double> p{1.0, 0.4, 0.4, 0.4, 0.4};
  const double pile2 = enumerate_pile2(p);
  // The enumeration agrees with 0.6 * (1 - 0.6^4): good 1 low and some other good high.
  EXPECT_NEAR(pile2, 0.6 * (1.0 - std::pow(0.6, 4)), 1e-15);
  const double frozen_pile2 = 0.52224;
  EXPECT_NEAR(1.0 - pile1_probability(prior, Division(p).q()), frozen_pile2, 1e-12);
}

TEST(DiscretePerGood, TiesGoToPileTwo) {
  DiscretePerGoodPrior prior;
  prior.goods = {{{1.0, 1.0}}, {{1.0, 1.0}}};
  const std::vector<double> q{0.5, -0.5};
  EXPECT_EQ(pile1_probability(prior, q), 0.0);
  // Values with rounding residue still count as a tie.
  const std::vector<double> q2{0.1 + 0.2, -0.3};
  EXPECT_EQ(pile1_probability(prior, q2), 0.0);
}

TEST(DiscretePerGood, FlattenMatchesProduct) {
  DiscretePerGoodPrior prior;
  prior.goods = {{{1.0, 0.25}, {2.0, 0.75}}, {{0.0, 0.5}, {3.0, 0.5}}, {{5.0, 1.0}}};
  const auto joint = flatten_to_joint(prior);
  ASSERT_EQ(joint.types.size(), 4u);
  EXPECT_EQ(joint.types[1].values, (std::vector<double>{1.0, 3.0, 5.0}));
  EXPECT_DOUBLE_EQ(joint.types[1].prob, 0.125);
  double total = 0.0;
  for (const auto& t : joint.types) total += t.prob;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_THROW(flatten_to_joint(prior, 3), CapacityError);
}

TEST(Uniform2, ClosedFormsMatchNumericalIntegration) {
  const int m = 1000;
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1.0, -0.3}, {0.4, -1.0}, {-0.7, 0.7}, {0.5, 0.5}}) {
    double count = 0.0, pos = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double s = a * (i + 0.5) / m + b * (j + 0.5) / m;
        count += s > 0.0 ? 1.0 : 0.0;
        pos += std::max(s, 0.0);
      }
    }
    EXPECT_NEAR(detail::uniform2_prob_positive(a, b), count / (m * m), 2e-3) << a << "," << b;
    EXPECT_NEAR(detail::uniform2_positive_part_mean(a, b), pos / (m * m), 1e-5) << a << "," << b;
  }
}

TEST(Uniform, MonteCarloIsSeededAndReportsError) {
  const PriorSpec prior = Uniform01Prior{4};
  const std::vector<double> q{1.0, -0.2, -0.3, 0.1};
  const auto a = pile1_probability_estimate(prior, q, {7, 50000});
  const auto b = pile1_probability_estimate(prior, q, {7, 50000});
  EXPECT_EQ(a.value, b.value);
  EXPECT_GT(a.standard_error, 0.0);
  EXPECT_LT(a.standard_error, 0.01);
}

TEST(Validation, RejectsMalformedPriors) {
  EXPECT_THROW(validate_prior(NormalPrior{{{1.0, 0.0}}}), DomainError);
  EXPECT_THROW(validate_prior(NormalPrior{}), DomainError);
  DiscretePerGoodPrior bad_sum;
  bad_sum.goods = {{{1.0, 0.5}, {2.0, 0.4}}};
  EXPECT_THROW(validate_prior(bad_sum), DomainError);
  DiscretePerGoodPrior dup;
  dup.goods = {{{1.0, 0.5}, {1.0, 0.5}}};
  EXPECT_THROW(validate_prior(dup), DomainError);
  JointDiscretePrior ragged;
  ragged.types = {{{1.0, 2.0}, 0.5}, {{1.0}, 0.5}};
  EXPECT_THROW(validate_prior(ragged), DomainError);
  EXPECT_THROW(validate_prior(Uniform01Prior{0}), DomainError);
}

TEST(Validation, InstanceDimensionsMustAgree) {
  const Instance inst{{1.0, 2.0}, NormalPrior{{{1.0, 1.0}}}};
  EXPECT_THROW(validate_instance(inst), DomainError);
}

TEST(ChooserFloor, HalfTotalAlwaysCoveredProperty) {
  Rng rng(14);
  JointDiscretePrior prior;
  prior.types = {{{1.0, 3.0, 2.0}, 0.2}, {{0.0, 1.0, 5.0}, 0.3}, {{4.0, 4.0, 0.5}, 0.5}};
  double half = 0.0;
  for (const auto& t : prior.types) {
    for (double v : t.values) half += 0.5 * t.prob * v;
  }
  for (int k = 0; k < 200; ++k) {
    std::vector<double> p(3);
    for (double& v : p) v = rng.uniform();
    EXPECT_GE(chooser_expected_utility(prior, Division(p)), half - 1e-12);
  }
}
