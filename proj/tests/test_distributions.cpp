#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ambichoice/distributions.hpp"
#include "ambichoice/scenario_io.hpp"
#include "test_support.hpp"

using namespace ambichoice;

namespace {

RawScenario perry_raw() {
  RawScenario raw;
  raw.treatments = {"0", "1"};
  raw.covariates = {"a", "b"};
  raw.covariate_distribution = {{"a", 0.5}, {"b", 0.5}};
  raw.experimental_marginals = {{"0", 0.49}, {"1", 0.67}};
  return raw;
}

ErrorKind kind_of(const RawScenario& raw) {
  try {
    validate_scenario(raw);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected validation to fail";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(ValidateScenario, AcceptsPerry) {
  const auto s = validate_scenario(perry_raw());
  EXPECT_EQ(s.covariates()[0], 0.5);
  EXPECT_EQ(s.marginals()[0], 0.49);
  EXPECT_EQ(s.marginals()[1], 0.67);
  EXPECT_FALSE(s.joint().has_value());
}

TEST(ValidateScenario, RejectsNonSimplex) {
  auto raw = perry_raw();
  raw.covariate_distribution["b"] = 0.4;
  EXPECT_EQ(kind_of(raw), ErrorKind::NonSimplex);
}

TEST(ValidateScenario, RejectsOutOfRange) {
  auto raw = perry_raw();
  raw.experimental_marginals["0"] = 1.2;
  EXPECT_EQ(kind_of(raw), ErrorKind::OutOfRange);
  raw = perry_raw();
  raw.covariate_distribution = {{"a", -0.1}, {"b", 1.1}};
  EXPECT_EQ(kind_of(raw), ErrorKind::OutOfRange);
}

TEST(ValidateScenario, RejectsMissingAndUnknownLabels) {
  auto raw = perry_raw();
  raw.covariate_distribution.erase("b");
  EXPECT_EQ(kind_of(raw), ErrorKind::MissingAssignment);
  raw = perry_raw();
  raw.experimental_marginals["2"] = 0.3;
  EXPECT_EQ(kind_of(raw), ErrorKind::UnknownLabel);
  raw = perry_raw();
  raw.covariates = {"a", "a"};
  EXPECT_EQ(kind_of(raw), ErrorKind::InvalidLabels);
  raw = perry_raw();
  raw.treatments = {};
  EXPECT_EQ(kind_of(raw), ErrorKind::InvalidLabels);
}

TEST(ValidateScenario, JointConsistency) {
  auto raw = perry_raw();
  raw.joint = {{"0", {{"a", 0.98}, {"b", 0.0}}}, {"1", {{"a", 0.34}, {"b", 1.0}}}};
  EXPECT_NO_THROW(validate_scenario(raw));

  raw.covariate_distribution = {{"a", 0.1}, {"b", 0.9}};
  EXPECT_EQ(kind_of(raw), ErrorKind::InconsistentJoint);

  raw = perry_raw();
  raw.joint = {{"0", {{"a", 0.98}, {"b", 0.0}}}};
  EXPECT_EQ(kind_of(raw), ErrorKind::MissingAssignment);
}

TEST(ValidateScenario, RenormalizesWithinTolerance) {
  auto raw = perry_raw();
  raw.covariate_distribution = {{"a", 0.5 + 4e-10}, {"b", 0.5}};
  const auto s = validate_scenario(raw);
  EXPECT_NEAR(s.covariates()[0] + s.covariates()[1], 1.0, 1e-15);
  raw.covariate_distribution = {{"a", 0.5 + 2e-9}, {"b", 0.5}};
  EXPECT_EQ(kind_of(raw), ErrorKind::NonSimplex);
}

TEST(ValidateScenario, ZeroMassCellsAllowed) {
  auto raw = perry_raw();
  raw.covariate_distribution = {{"a", 0.0}, {"b", 1.0}};
  EXPECT_NO_THROW(validate_scenario(raw));
}

TEST(ValidateScenario, IdempotentOnRandomScenarios) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto s = gen::random_scenario(1 + i % 6, 1 + i % 4, rng, 0.1);
    const auto again = validate_scenario(to_raw(s));
    EXPECT_EQ(again, s);
    EXPECT_EQ(validate_scenario(to_raw(again)), again);
  }
}

TEST(EnumerateRules, TwoByTwoLexicographic) {
  const auto rules = enumerate_rules(CovariateSpace({"a", "b"}), TreatmentSet({"0", "1"}));
  ASSERT_EQ(rules.size(), 4u);
  const TreatmentSet t({"0", "1"});
  EXPECT_EQ(describe(rules[0], t), "tau(0,0)");
  EXPECT_EQ(describe(rules[1], t), "tau(0,1)");
  EXPECT_EQ(describe(rules[2], t), "tau(1,0)");
  EXPECT_EQ(describe(rules[3], t), "tau(1,1)");
}

TEST(EnumerateRules, Counts) {
  EXPECT_EQ(enumerate_rules(CovariateSpace({"a", "b", "c"}), TreatmentSet({"0", "1"})).size(), 8u);
  EXPECT_EQ(enumerate_rules(CovariateSpace({"a"}), TreatmentSet({"0", "1", "2"})).size(), 3u);
}

TEST(EnumerateRules, CoversEveryTotalMapExactlyOnce) {
  for (std::size_t nx = 1; nx <= 3; ++nx) {
    for (std::size_t nt = 1; nt <= 3; ++nt) {
      const auto rules = enumerate_rules(CovariateSpace(gen::numbered("x", nx)),
                                         TreatmentSet(gen::binary_digits(nt)));
      std::set<std::vector<std::size_t>> seen;
      for (const auto& r : rules) seen.emplace(r.assignment().begin(), r.assignment().end());
      std::size_t expected = 1;
      for (std::size_t i = 0; i < nx; ++i) expected *= nt;
      EXPECT_EQ(rules.size(), expected);
      EXPECT_EQ(seen.size(), expected);
      // Membership of every total map.
      std::vector<std::size_t> digits(nx, 0);
      for (std::size_t n = 0; n < expected; ++n) {
        EXPECT_TRUE(seen.count(digits)) << nx << "x" << nt;
        for (std::size_t x = nx; x-- > 0;) {
          if (++digits[x] < nt) break;
          digits[x] = 0;
        }
      }
    }
  }
}

TEST(EnumerateRules, SizeLimit) {
  const CovariateSpace big(gen::numbered("x", 13));
  try {
    enumerate_rules(big, TreatmentSet({"0", "1"}));
    FAIL() << "expected SizeLimit";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
  }
  EXPECT_EQ(enumerate_rules(CovariateSpace(gen::numbered("x", 12)), TreatmentSet({"0", "1"})).size(),
            4096u);
  EXPECT_EQ(enumerate_rules(big, TreatmentSet({"0", "1"}), 8192).size(), 8192u);
}

TEST(MarginalizeJoint, PerryWorld) {
  const auto q = marginalize_joint(perry_witness_world());
  EXPECT_NEAR(q[0], 0.49, 1e-15);
  EXPECT_NEAR(q[1], 0.67, 1e-15);
}

TEST(MarginalizeJoint, ConstantConditionalMean) {
  CovariateDistribution pi(CovariateSpace({"a", "b", "c"}), {0.2, 0.3, 0.5});
  JointResponseModel m(pi, TreatmentSet({"0"}), {{0.37, 0.37, 0.37}});
  EXPECT_NEAR(marginalize_joint(m)[0], 0.37, 1e-15);
}

TEST(MarginalizeJoint, WeightedSum) {
  CovariateDistribution pi(CovariateSpace({"a", "b", "c"}), {0.2, 0.3, 0.5});
  JointResponseModel m(pi, TreatmentSet({"0"}), {{1.0, 0.0, 0.4}});
  EXPECT_NEAR(marginalize_joint(m)[0], 0.4, 1e-15);
}

TEST(TrueRuleValue, PerryWorld) {
  const auto m = perry_witness_world();
  EXPECT_NEAR(true_rule_value(m, TreatmentRule({0, 1}, 2)), 0.99, 1e-15);
  EXPECT_NEAR(true_rule_value(m, TreatmentRule({1, 0}, 2)), 0.17, 1e-15);
}

TEST(TrueRuleValue, ConstantRuleEqualsMarginalExactly) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto m = gen::random_joint(1 + i % 5, 1 + i % 3, rng, 0.1);
    const auto q = marginalize_joint(m);
    for (std::size_t t = 0; t < q.size(); ++t) {
      EXPECT_EQ(true_rule_value(m, TreatmentRule::constant(m.covariates().size(), t, q.size())), q[t]);
    }
  }
}

TEST(TreatmentRule, RejectsBadCodomain) {
  EXPECT_THROW(TreatmentRule({0, 2}, 2), Error);
  const auto m = perry_witness_world();
  EXPECT_THROW(true_rule_value(m, TreatmentRule({0, 1, 1}, 2)), Error);
}
