#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "dnc/io.hpp"
#include "dnc/solver_discrete.hpp"
#include "dnc/verify.hpp"

using namespace dnc;

namespace {

std::vector<Instance> sample_instances() {
  DiscretePerGoodPrior per_good;
  per_good.goods = {{{0.5, 0.25}, {2.0, 0.75}}, {{1.0, 1.0}}};
  return {instances::not_monotone(), Instance{{1.0, -2.0}, per_good}, Instance{{2.0, 1.0}, instances::two_by_two()},
          Instance{{1.0, 0.3}, Uniform01Prior{2}}};
}

void expect_same_prior(const PriorSpec& a, const PriorSpec& b) {
  EXPECT_EQ(prior_to_json(a), prior_to_json(b));
  EXPECT_EQ(a.index(), b.index());
}

}  // namespace

TEST(InstanceJson, RoundTripEveryPriorKind) {
  for (const auto& inst : sample_instances()) {
    const auto text = instance_to_json(inst).dump();
    const auto back = instance_from_json(parse_json_text(text, "test"));
    EXPECT_EQ(back.divider_values, inst.divider_values);
    expect_same_prior(back.prior, inst.prior);
  }
}

TEST(InstanceJson, StrictKeysAndTypes) {
  auto j = instance_to_json(instances::not_monotone());
  auto extra = j;
  extra["comment"] = "x";
  EXPECT_THROW(instance_from_json(extra), DomainError);
  auto missing = j;
  missing.erase("prior");
  EXPECT_THROW(instance_from_json(missing), DomainError);
  auto wrong = j;
  wrong["divider_values"] = "1,2,3";
  EXPECT_THROW(instance_from_json(wrong), DomainError);
  auto kind = j;
  kind["prior"]["kind"] = "beta";
  EXPECT_THROW(instance_from_json(kind), DomainError);
  auto good_key = j;
  good_key["prior"]["goods"][0]["sd"] = 1.0;
  EXPECT_THROW(instance_from_json(good_key), DomainError);
  auto n = Json::parse(R"({"divider_values":[1,2],"prior":{"kind":"uniform01","n":2.5}})");
  EXPECT_THROW(instance_from_json(n), DomainError);
  EXPECT_THROW(parse_json_text("{", "test"), DomainError);
}

TEST(InstanceJson, ValidationNamesPrecondition) {
  const auto j = Json::parse(R"({"divider_values":[0,0],"prior":{"kind":"uniform01","n":2}})");
  try {
    instance_from_json(j);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("not all zero"), std::string::npos);
  }
  const auto bad = Json::parse(R"({"divider_values":[1],"prior":{"kind":"normal","goods":[{"mean":1,"stdev":-1}]}})");
  EXPECT_THROW(instance_from_json(bad), DomainError);
}

TEST(ReportJson, RoundTripFieldForField) {
  const Instance inst{{2.0, 1.0}, instances::two_by_two()};
  auto rep = solve_discrete(inst);
  rep.pile1_probability_stderr = 0.0125;
  const auto file = report_file(rep, Json{{"command", "solve"}}, 0.5);
  const auto back = report_from_file_json(parse_json_text(file.dump(2), "test"));
  EXPECT_EQ(back.division, rep.division);
  EXPECT_EQ(back.pile1_probability, rep.pile1_probability);
  EXPECT_EQ(back.divider_utility, rep.divider_utility);
  EXPECT_EQ(back.chooser_utility, rep.chooser_utility);
  EXPECT_EQ(back.baseline_divider, rep.baseline_divider);
  EXPECT_EQ(back.method, rep.method);
  EXPECT_EQ(back.gap_bound, rep.gap_bound);
  EXPECT_EQ(back.iterations, rep.iterations);
  EXPECT_EQ(back.pile1_probability_stderr, rep.pile1_probability_stderr);
  EXPECT_EQ(back.notes, rep.notes);
  EXPECT_EQ(file["config"]["command"], "solve");
  EXPECT_EQ(file["version"], kToolVersion);
}

TEST(ReportJson, NullOptionalsAndBadFields) {
  SolveReport rep;
  rep.division = Division({0.3, 0.7});
  rep.divider_utility = 1.0 / 3.0;
  const auto j = report_to_json(rep);
  EXPECT_TRUE(j["chooser_utility"].is_null());
  const auto back = report_from_json(j);
  EXPECT_FALSE(back.chooser_utility.has_value());
  EXPECT_FALSE(back.gap_bound.has_value());
  EXPECT_EQ(back.divider_utility, rep.divider_utility);
  auto bad = j;
  bad["method"] = "magic";
  EXPECT_THROW(report_from_json(bad), DomainError);
  bad = j;
  bad["iterations"] = -1;
  EXPECT_THROW(report_from_json(bad), DomainError);
  bad = j;
  bad["division"] = Json::array({1.5});
  EXPECT_THROW(report_from_json(bad), DomainError);
}
