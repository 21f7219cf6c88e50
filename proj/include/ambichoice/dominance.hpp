#pragma once

// Dominance between rules under ambiguity. Two rule values are coupled through
// the same unknown joint, so dominance is decided from the largest achievable
// difference M_z - M_z' over all joints consistent with the data, not from the
// marginal intervals alone.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ambichoice/bounds.hpp"
#include "ambichoice/distributions.hpp"

namespace ambichoice {

/// Gaps with absolute value at or below this are treated as zero.
inline constexpr double kDecisionTolerance = 1e-12;

enum class PairRelation { dominates, dominated_by, equivalent, incomparable };

constexpr std::string_view to_string(PairRelation r) noexcept {
  switch (r) {
    case PairRelation::dominates: return "dominates";
    case PairRelation::dominated_by: return "dominated_by";
    case PairRelation::equivalent: return "equivalent";
    case PairRelation::incomparable: return "incomparable";
  }
  return "unknown";
}

constexpr PairRelation mirror(PairRelation r) noexcept {
  switch (r) {
    case PairRelation::dominates: return PairRelation::dominated_by;
    case PairRelation::dominated_by: return PairRelation::dominates;
    default: return r;
  }
}

/// Relation of z to z' given forward = max(M_z - M_z') and backward =
/// max(M_z' - M_z) over the feasible joints. Weakly worse everywhere and
/// strictly worse somewhere is dominated; zero both ways is equivalent.
constexpr PairRelation relation_from_gaps(double forward, double backward,
                                          double tol = kDecisionTolerance) noexcept {
  const bool forward_positive = forward > tol;
  const bool backward_positive = backward > tol;
  if (!forward_positive && backward_positive) return PairRelation::dominated_by;
  if (forward_positive && !backward_positive) return PairRelation::dominates;
  if (!forward_positive && !backward_positive) return PairRelation::equivalent;
  return PairRelation::incomparable;
}

namespace detail {

inline int rule_coefficient(const TreatmentRule& z, const TreatmentRule& zp, std::size_t t,
                            std::size_t x) {
  return (z(x) == t ? 1 : 0) - (zp(x) == t ? 1 : 0);
}

}  // namespace detail

/// G(z, z') = max over consistent joints of M_z - M_z'.
///
/// The objective and constraints separate by treatment. For treatment t the
/// cells carry coefficient +1, 0 or -1; the maximum fills q_t into the +1 cells
/// first, then the 0 cells, and only the remainder lands on -1 cells:
/// g_t = min(q_t, S+) - max(0, q_t - S+ - S0).
inline double max_gap(const CovariateDistribution& pi, const ExperimentalMarginals& q,
                      const TreatmentRule& z, const TreatmentRule& zp) {
  check_rule_shape(z, pi.size(), q.size());
  check_rule_shape(zp, pi.size(), q.size());
  double gap = 0.0;
  for (std::size_t t = 0; t < q.size(); ++t) {
    const double positive =
        pi.mass_where([&](std::size_t x) { return detail::rule_coefficient(z, zp, t, x) > 0; });
    const double non_negative =
        pi.mass_where([&](std::size_t x) { return detail::rule_coefficient(z, zp, t, x) >= 0; });
    gap += std::min(q[t], positive) - std::max(0.0, q[t] - non_negative);
  }
  return gap;
}

inline double max_gap(const Scenario& s, const TreatmentRule& z, const TreatmentRule& zp) {
  return max_gap(s.covariates(), s.marginals(), z, zp);
}

struct GapWitness {
  double gap;
  JointResponseModel world;
};

/// max_gap together with a joint that attains it, built from the same greedy fill.
inline GapWitness max_gap_witness(const Scenario& s, const TreatmentRule& z,
                                  const TreatmentRule& zp) {
  const auto& pi = s.covariates();
  const auto& q = s.marginals();
  const double gap = max_gap(pi, q, z, zp);
  std::vector<std::vector<double>> table(q.size(), std::vector<double>(pi.size(), 0.0));
  for (std::size_t t = 0; t < q.size(); ++t) {
    std::vector<std::size_t> order(pi.size());
    for (std::size_t x = 0; x < order.size(); ++x) order[x] = x;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return detail::rule_coefficient(z, zp, t, a) > detail::rule_coefficient(z, zp, t, b);
    });
    double remaining = q[t];
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t x = order[k];
      if (pi[x] <= 0.0) continue;
      const double take = std::min(remaining, pi[x]);
      table[t][x] = std::clamp(take / pi[x], 0.0, 1.0);
      remaining -= take;
    }
  }
  return {gap, JointResponseModel(pi, q.treatments(), std::move(table))};
}

/// Relation of z to z' (dominated_by means z' dominates z).
inline PairRelation relate(const TreatmentRule& z, const TreatmentRule& zp, const Scenario& s) {
  return relation_from_gaps(max_gap(s, z, zp), max_gap(s, zp, z));
}

struct RuleAssessment {
  TreatmentRule rule;
  Interval bounds;
  bool dominated = false;
  std::vector<std::size_t> dominated_by;  // indices into DominanceReport::rules
  bool maximin = false;
};

struct DominanceReport {
  std::vector<RuleAssessment> rules;
  std::size_t maximin_index = 0;

  std::vector<std::size_t> dominated() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (rules[i].dominated) out.push_back(i);
    }
    return out;
  }
  std::vector<std::size_t> undominated() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (!rules[i].dominated) out.push_back(i);
    }
    return out;
  }
};

namespace detail {

inline std::size_t maximin_index(const std::vector<Interval>& bounds) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < bounds.size(); ++i) {
    if (bounds[i].lb > bounds[best].lb) best = i;
  }
  return best;
}

}  // namespace detail

/// Classifies every rule as dominated or undominated, listing the rules that
/// dominate it, and flags the maximin rule.
inline DominanceReport dominance_partition(const Scenario& s, std::size_t cap = kDefaultRuleCap) {
  const auto rules = enumerate_rules(s, cap);
  const std::size_t n = rules.size();

  std::vector<std::vector<double>> gap(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) gap[i][j] = max_gap(s, rules[i], rules[j]);
    }
  }

  DominanceReport report;
  std::vector<Interval> bounds;
  bounds.reserve(n);
  report.rules.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RuleAssessment row{rules[i], rule_value_bounds(s, rules[i]), false, {}, false};
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && relation_from_gaps(gap[i][j], gap[j][i]) == PairRelation::dominated_by) {
        row.dominated_by.push_back(j);
      }
    }
    row.dominated = !row.dominated_by.empty();
    bounds.push_back(row.bounds);
    report.rules.push_back(std::move(row));
  }
  report.maximin_index = detail::maximin_index(bounds);
  report.rules[report.maximin_index].maximin = true;
  return report;
}

/// Rule with the greatest lower bound on its mean outcome; ties go to the
/// earliest rule in enumeration order.
inline TreatmentRule maximin_rule(const Scenario& s, std::size_t cap = kDefaultRuleCap) {
  const auto rules = enumerate_rules(s, cap);
  std::vector<Interval> bounds;
  bounds.reserve(rules.size());
  for (const auto& r : rules) bounds.push_back(rule_value_bounds(s, r));
  return rules[detail::maximin_index(bounds)];
}

}  // namespace ambichoice
