#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ambichoice/planner.hpp"
#include "ambichoice/scenario_io.hpp"
#include "test_support.hpp"

using namespace ambichoice;

namespace {

template <class Rng>
Coarsening random_coarsening(const CovariateSpace& fine, Rng& rng) {
  std::uniform_int_distribution<std::size_t> cell(0, fine.size() - 1);
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < fine.size(); ++x) labels.push_back("w" + std::to_string(cell(rng)));
  return Coarsening(fine, labels);
}

}  // namespace

TEST(OptimalRule, PerryWorld) {
  const auto best = optimal_rule(perry_witness_world());
  EXPECT_EQ(best.rule, TreatmentRule({0, 1}, 2));
  EXPECT_NEAR(best.value, 0.99, 1e-15);
}

TEST(OptimalRule, HomogeneousResponse) {
  CovariateDistribution pi(CovariateSpace({"a", "b", "c"}), {0.2, 0.3, 0.5});
  JointResponseModel m(pi, TreatmentSet({"0", "1"}), {{0.6, 0.6, 0.6}, {0.4, 0.4, 0.4}});
  const auto best = optimal_rule(m);
  EXPECT_EQ(best.rule, TreatmentRule::constant(3, 0, 2));
  EXPECT_NEAR(best.value, 0.6, 1e-15);
  EXPECT_NEAR(worst_case_value(m), 0.4, 1e-15);
}

TEST(OptimalRule, CellwiseArgmax) {
  CovariateDistribution pi(CovariateSpace({"a", "b"}), {0.5, 0.5});
  JointResponseModel m(pi, TreatmentSet({"0", "1"}), {{0.9, 0.2}, {0.3, 0.8}});
  const auto best = optimal_rule(m);
  EXPECT_EQ(best.rule, TreatmentRule({0, 1}, 2));
  EXPECT_NEAR(best.value, 0.85, 1e-15);
}

TEST(OptimalRule, TiesGoToFirstTreatment) {
  CovariateDistribution pi(CovariateSpace({"a"}), {1.0});
  JointResponseModel m(pi, TreatmentSet({"0", "1", "2"}), {{0.2}, {0.7}, {0.7}});
  EXPECT_EQ(optimal_rule(m).rule, TreatmentRule({1}, 3));
}

TEST(WorstCaseValue, PerryWorld) { EXPECT_NEAR(worst_case_value(perry_witness_world()), 0.17, 1e-15); }

TEST(WorstCaseValue, BracketsEveryRule) {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 300; ++i) {
    const auto m = gen::random_joint(1 + i % 4, 1 + i % 3, rng, 0.1);
    const double best = optimal_rule(m).value;
    const double worst = worst_case_value(m);
    EXPECT_LE(worst, best);
    for (const auto& rule : enumerate_rules(m.covariates().space(), m.treatments())) {
      const double v = true_rule_value(m, rule);
      EXPECT_LE(v, best + 1e-15);
      EXPECT_GE(v, worst - 1e-15);
    }
  }
}

TEST(Coarsen, CollapseAllRecoversMarginals) {
  const auto coarse = coarsen(perry_witness_world(), Coarsening::collapse_all(CovariateSpace({"a", "b"})));
  ASSERT_EQ(coarse.covariates().size(), 1u);
  EXPECT_EQ(coarse.covariates()[0], 1.0);
  EXPECT_NEAR(coarse.success(0, 0), 0.49, 1e-15);
  EXPECT_NEAR(coarse.success(1, 0), 0.67, 1e-15);
}

TEST(Coarsen, IdentityIsNoOp) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 50; ++i) {
    const auto m = gen::random_joint(1 + i % 5, 2, rng);
    const auto same = coarsen(m, Coarsening::identity(m.covariates().space()));
    EXPECT_EQ(same.covariates(), m.covariates());
    for (std::size_t t = 0; t < 2; ++t) {
      for (std::size_t x = 0; x < m.covariates().size(); ++x) {
        EXPECT_NEAR(same.success(t, x), m.success(t, x), 1e-15);
      }
    }
  }
}

TEST(Coarsen, MergesWithWeightedAverage) {
  CovariateDistribution pi(CovariateSpace({"a", "b", "c"}), {0.2, 0.3, 0.5});
  JointResponseModel m(pi, TreatmentSet({"0"}), {{1.0, 0.0, 0.9}});
  const auto coarse = coarsen(m, Coarsening(pi.space(), std::map<std::string, std::string>{
                                                            {"a", "ab"}, {"b", "ab"}, {"c", "c"}}));
  ASSERT_EQ(coarse.covariates().size(), 2u);
  EXPECT_EQ(coarse.covariates().space()[0], "ab");
  EXPECT_NEAR(coarse.covariates()[0], 0.5, 1e-15);
  EXPECT_NEAR(coarse.success(0, 0), 0.4, 1e-15);
  EXPECT_NEAR(coarse.success(0, 1), 0.9, 1e-15);
}

TEST(Coarsen, DropsZeroMassCells) {
  CovariateDistribution pi(CovariateSpace({"a", "b", "c"}), {0.0, 0.4, 0.6});
  JointResponseModel m(pi, TreatmentSet({"0"}), {{0.3, 0.5, 0.5}});
  const auto coarse = coarsen(m, Coarsening(pi.space(), std::vector<std::string>{"z", "y", "y"}));
  ASSERT_EQ(coarse.covariates().size(), 1u);
  EXPECT_EQ(coarse.covariates().space()[0], "y");
}

TEST(Coarsen, RejectsPartialMapping) {
  const CovariateSpace space({"a", "b"});
  EXPECT_THROW(Coarsening(space, std::map<std::string, std::string>{{"a", "w"}}), Error);
}

TEST(Coarsen, PreservesMarginals) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 300; ++i) {
    const auto m = gen::random_joint(1 + i % 6, 1 + i % 3, rng, 0.1);
    const auto w = random_coarsening(m.covariates().space(), rng);
    const auto fine = marginalize_joint(m);
    const auto coarse = marginalize_joint(coarsen(m, w));
    for (std::size_t t = 0; t < fine.size(); ++t) EXPECT_NEAR(fine[t], coarse[t], 1e-12);
  }
}

TEST(JensenCheck, PerryWorldCollapseAll) {
  const auto j = jensen_check(perry_witness_world(), Coarsening::collapse_all(CovariateSpace({"a", "b"})));
  EXPECT_NEAR(j.fine_optimum, 0.99, 1e-15);
  EXPECT_NEAR(j.coarse_optimum, 0.67, 1e-15);
  EXPECT_NEAR(j.fine_worst, 0.17, 1e-15);
  EXPECT_NEAR(j.coarse_worst, 0.49, 1e-15);
}

TEST(JensenCheck, HomogeneousEquality) {
  CovariateDistribution pi(CovariateSpace({"a", "b"}), {0.25, 0.75});
  JointResponseModel m(pi, TreatmentSet({"0", "1"}), {{0.5, 0.5}, {0.75, 0.75}});
  const auto j = jensen_check(m, Coarsening::collapse_all(pi.space()));
  EXPECT_EQ(j.fine_optimum, 0.75);
  EXPECT_EQ(j.coarse_optimum, 0.75);
  EXPECT_EQ(j.fine_worst, 0.5);
  EXPECT_EQ(j.coarse_worst, 0.5);
}

TEST(JensenCheck, InequalitiesHoldOnRandomInstances) {
  std::mt19937_64 rng(79);
  for (int i = 0; i < 1000; ++i) {
    const auto m = gen::random_joint(1 + i % 6, 2 + i % 3, rng, 0.1);
    const auto j = jensen_check(m, random_coarsening(m.covariates().space(), rng));
    EXPECT_GE(j.fine_optimum, j.coarse_optimum - 1e-12);
    EXPECT_LE(j.fine_worst, j.coarse_worst + 1e-12);
  }
}

TEST(OptimalRule, InvariantUnderCovariateRelabeling) {
  std::mt19937_64 rng(83);
  for (int i = 0; i < 100; ++i) {
    const std::size_t nx = 2 + i % 4;
    const auto m = gen::random_joint(nx, 3, rng);
    std::vector<std::size_t> perm(nx);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> labels;
    std::vector<double> mass;
    std::vector<std::vector<double>> p(3);
    for (std::size_t k = 0; k < nx; ++k) {
      labels.push_back(m.covariates().space()[perm[k]]);
      mass.push_back(m.covariates()[perm[k]]);
      for (std::size_t t = 0; t < 3; ++t) p[t].push_back(m.success(t, perm[k]));
    }
    const JointResponseModel permuted(CovariateDistribution(CovariateSpace(labels), mass),
                                      m.treatments(), p);
    const auto a = optimal_rule(m);
    const auto b = optimal_rule(permuted);
    EXPECT_NEAR(a.value, b.value, 1e-12);
    for (std::size_t k = 0; k < nx; ++k) EXPECT_EQ(b.rule(k), a.rule(perm[k]));
  }
}
