#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dnc/offers.hpp"
#include "dnc/risk.hpp"
#include "dnc/solver_discrete.hpp"
#include "dnc/verify.hpp"

using namespace dnc;

// --- risk ------------------------------------------------------------------

TEST(RiskProfile, ConstructionAndDomain) {
  EXPECT_THROW(RiskProfile::power(0.0), DomainError);
  EXPECT_THROW(RiskProfile::power(1.5), DomainError);
  const auto f = RiskProfile::sqrt_shifted(-2.0);
  EXPECT_DOUBLE_EQ(f(2.0), 2.0);
  EXPECT_THROW(f(-3.0), DomainError);
  EXPECT_DOUBLE_EQ(RiskProfile::power(0.5)(9.0), 3.0);
}

TEST(RiskProfile, ReachableRangeMustBeInDomain) {
  const std::vector<double> g{1.0, -2.0};
  EXPECT_THROW(check_risk_profile(RiskProfile::sqrt_shifted(0.0), g), DomainError);
  EXPECT_NO_THROW(check_risk_profile(RiskProfile::sqrt_shifted(-2.0), g));
  EXPECT_NO_THROW(check_risk_profile(RiskProfile::neutral(), g));
}

TEST(Lottery, CounterexampleUtilities) {
  const auto inst = instances::lottery_counterexample();
  const auto f = RiskProfile::sqrt_shifted(0.0);
  // Two-thirds of good 2 with good 1: the chooser takes pile 2 for both types,
  // leaving the divider a 2/3 chance at 16.
  EXPECT_NEAR(risk_utility_lottery(inst.divider_values, Division({0.0, 2.0 / 3.0}), inst.prior, f), 8.0 / 3.0, 1e-12);
  // Separate piles: each pile with probability 1/2.
  EXPECT_NEAR(risk_utility_lottery(inst.divider_values, Division({0.0, 1.0}), inst.prior, f), 3.0, 1e-12);
}

TEST(Lottery, DivisibleReadingDiffers) {
  const auto inst = instances::lottery_counterexample();
  const auto f = RiskProfile::sqrt_shifted(0.0);
  const double sure = risk_utility_divisible(inst.divider_values, Division({0.0, 2.0 / 3.0}), inst.prior, f);
  EXPECT_NEAR(sure, std::sqrt(32.0 / 3.0), 1e-12);
  EXPECT_NEAR(risk_utility_divisible(inst.divider_values, Division({0.0, 1.0}), inst.prior, f), 3.0, 1e-12);
  EXPECT_GT(sure, 3.0);
}

TEST(Lottery, NeutralLotteryEqualsDivisibleProperty) {
  Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    const auto inst = gen::random_joint_instance(rng, 4, 4);
    std::vector<double> p(inst.n());
    for (double& v : p) v = rng.uniform();
    const Division d(p);
    const auto f = RiskProfile::neutral();
    EXPECT_NEAR(risk_utility_lottery(inst.divider_values, d, inst.prior, f),
                risk_utility_divisible(inst.divider_values, d, inst.prior, f), 1e-12);
  }
}

TEST(Lottery, CapOnGoods) {
  const std::vector<double> g(21, 1.0);
  const PriorSpec prior = NormalPrior{std::vector<NormalGood>(21, {1, 1})};
  EXPECT_THROW(risk_utility_lottery(g, Division::even(21), prior, RiskProfile::neutral()), CapacityError);
}

TEST(SolveRisk, LotteryPrefersSeparatePiles) {
  const auto inst = instances::lottery_counterexample();
  const auto rep = solve_risk_averse(inst, RiskProfile::sqrt_shifted(0.0), RiskInterpretation::lottery, 0.01);
  EXPECT_GE(rep.divider_utility, 3.0 - 1e-12);
  EXPECT_EQ(rep.method, SolveMethod::risk_grid);
}

TEST(SolveRisk, AverseNeverRaisesP) {
  const Instance inst = instances::normal({3.0, 1.0}, {{1.0, 0.2}, {2.0, 0.2}});
  const auto averse = solve_risk_averse(inst, RiskProfile::sqrt_shifted(0.0), RiskInterpretation::divisible, 0.01);
  const auto neutral = solve_risk_averse(inst, RiskProfile::neutral(), RiskInterpretation::divisible, 0.01);
  EXPECT_LE(averse.pile1_probability, neutral.pile1_probability + 1e-9);
}

TEST(SolveRisk, AverseNeverRaisesPProperty) {
  Rng rng(62);
  const auto f = RiskProfile::sqrt_shifted(0.0);
  for (int t = 0; t < 30; ++t) {
    const auto inst = t % 2 ? gen::random_normal(rng, 2) : gen::random_joint_instance(rng, 2, 4);
    const auto a = solve_risk_averse(inst, f, RiskInterpretation::divisible, 0.02);
    const auto n = solve_risk_averse(inst, RiskProfile::neutral(), RiskInterpretation::divisible, 0.02);
    EXPECT_LE(a.pile1_probability, n.pile1_probability + 1e-9) << "trial " << t;
  }
}

// --- multiple offers ---------------------------------------------------------

TEST(ChooserBestOption, HighestValueThenDividerThenOrder) {
  OfferMenu menu{Division::even(2), {{0.25, 1.0}}};
  const std::vector<double> chooser{2.0, 1.0};
  // alt(0) gives the chooser 0.75 * 2 = 1.5, the same as either even pile.
  EXPECT_EQ(chooser_best_option(menu, chooser).kind, MenuOption::Kind::pile2);
  const std::vector<double> divider{1.0, 1.0};
  const auto pick = chooser_best_option(menu, chooser, divider);
  EXPECT_EQ(pick.kind, MenuOption::Kind::alternative);
  EXPECT_EQ(pick.to_string(), "alt(0)");
}

TEST(ChooserBestOption, StrictPreferenceWins) {
  OfferMenu menu{Division({1.0, 0.0}), {{0.5, 0.5}}};
  const std::vector<double> chooser{3.0, 1.0};
  EXPECT_EQ(chooser_best_option(menu, chooser).kind, MenuOption::Kind::pile1);
  const std::vector<double> other{1.0, 3.0};
  EXPECT_EQ(chooser_best_option(menu, other).kind, MenuOption::Kind::pile2);
}

TEST(EvalMenu, DifferentValues) {
  OfferMenu menu{Division::even(2), {{1.0, 0.0}}};
  const auto v = eval_menu(menu, std::vector<double>{2.0, 1.0}, instances::two_by_two());
  EXPECT_NEAR(v.divider, 1.875, 1e-12);
  EXPECT_NEAR(v.chooser, 1.625, 1e-12);
}

TEST(EvalMenu, EqualValuesReconstruction) {
  // Chooser-side 0.75 of either good: divider-side (0.25, 1) and (1, 0.25).
  OfferMenu menu{Division::even(2), {{0.25, 1.0}, {1.0, 0.25}}};
  const auto low = eval_menu(menu, std::vector<double>{1.0, 1.0}, instances::two_by_two());
  const auto high = eval_menu(menu, std::vector<double>{2.0, 2.0}, instances::two_by_two());
  EXPECT_NEAR(low.divider, 1.125, 1e-12);
  EXPECT_NEAR(low.chooser, 1.5, 1e-12);
  EXPECT_NEAR(0.5 * (low.divider + high.divider), 1.6875, 1e-12);
  EXPECT_NEAR(0.5 * (low.chooser + high.chooser), 1.5, 1e-12);
}

TEST(EvalMenu, ValidatesShapes) {
  OfferMenu bad{Division::even(2), {{1.5, 0.0}}};
  EXPECT_THROW(bad.validate(), DomainError);
  OfferMenu short_alt{Division::even(2), {{1.0}}};
  EXPECT_THROW(short_alt.validate(), DomainError);
}

TEST(SetPartitions, BellNumbers) {
  for (auto [m, bell] : std::vector<std::pair<std::size_t, int>>{{1, 1}, {2, 2}, {3, 5}, {4, 15}, {6, 203}}) {
    int count = 0;
    detail::for_each_set_partition(m, [&](const std::vector<std::size_t>&) { ++count; });
    EXPECT_EQ(count, bell) << "m=" << m;
  }
}

TEST(SolveMultipleOffers, PaperValues) {
  const auto [menu, rep] = solve_multiple_offers(std::vector<double>{2.0, 1.0}, instances::two_by_two());
  EXPECT_NEAR(rep.divider_utility, 1.875, 1e-9);
  EXPECT_NEAR(*rep.chooser_utility, 1.625, 1e-9);
  EXPECT_EQ(menu.base, Division::even(2));
  double d = 0.0, c = 0.0;
  for (double v : {1.0, 2.0}) {
    const auto [m, r] = solve_multiple_offers(std::vector<double>{v, v}, instances::two_by_two());
    d += 0.5 * r.divider_utility;
    c += 0.5 * *r.chooser_utility;
  }
  EXPECT_NEAR(d, 1.6875, 1e-9);
  EXPECT_NEAR(c, 1.5, 1e-9);
}

TEST(SolveMultipleOffers, AtLeastSingleDivisionProperty) {
  Rng rng(63);
  for (int t = 0; t < 30; ++t) {
    const auto inst = gen::random_joint_instance(rng, 3, 5);
    const auto& joint = std::get<JointDiscretePrior>(inst.prior);
    const auto [menu, rep] = solve_multiple_offers(inst.divider_values, joint);
    EXPECT_GE(rep.divider_utility, solve_discrete(inst).divider_utility - 1e-9);
    const auto again = eval_menu(menu, inst.divider_values, joint);
    EXPECT_NEAR(again.divider, rep.divider_utility, 1e-12);
  }
}

TEST(SolveMultipleOffers, Caps) {
  Rng rng(64);
  const auto many = gen::random_joint(rng, 2, 40);
  ASSERT_GT(many.types.size(), kMenuMaxTypes);
  EXPECT_THROW(solve_multiple_offers(std::vector<double>{1.0, 1.0}, many), CapacityError);
  JointDiscretePrior wide;
  wide.types = {{std::vector<double>(7, 1.0), 1.0}};
  EXPECT_THROW(solve_multiple_offers(std::vector<double>(7, 1.0), wide), CapacityError);
}
