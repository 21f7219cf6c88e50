#pragma once

// Sharp identified sets for rule values when the experiment reveals only the
// covariate-free marginals q_t and the planner knows P(x).

#include <algorithm>
#include <array>
#include <cstddef>
#include <utility>

#include "ambichoice/distributions.hpp"

namespace ambichoice {

/// Identified set of the mean outcome under `rule`.
///
/// With A_t = {x : z(x) = t}, each treatment's contribution sum_{x in A_t} pi_x p_{t,x}
/// ranges over [max(0, q_t - pi(X \ A_t)), min(q_t, pi(A_t))] and the treatments
/// vary independently, so the bounds add up across t. For two covariates and
/// two treatments this is the classical mixing-problem bound pair.
inline Interval rule_value_bounds(const CovariateDistribution& pi, const ExperimentalMarginals& q,
                                  const TreatmentRule& rule) {
  check_rule_shape(rule, pi.size(), q.size());
  Interval out;
  for (std::size_t t = 0; t < q.size(); ++t) {
    const double inside = pi.mass_where([&](std::size_t x) { return rule(x) == t; });
    const double outside = pi.mass_where([&](std::size_t x) { return rule(x) != t; });
    out.lb += std::max(0.0, q[t] - outside);
    out.ub += std::min(q[t], inside);
  }
  out.ub = std::min(out.ub, 1.0);
  out.lb = std::min(out.lb, out.ub);
  return out;
}

inline Interval rule_value_bounds(const Scenario& s, const TreatmentRule& rule) {
  return rule_value_bounds(s.covariates(), s.marginals(), rule);
}

/// One of the six orderings of q_0, q_1, P(x=a), P(x=b) for a 2x2 problem,
/// evaluated after relabelling so that q_0 <= q_1 and P(x=a) <= P(x=b).
struct BinaryCase {
  int number = 0;
  bool treatments_swapped = false;
  bool covariates_swapped = false;

  friend bool operator==(const BinaryCase&, const BinaryCase&) = default;
};

namespace detail {

struct NormalizedBinary {
  double q0, q1, pa, pb;
  bool treatments_swapped, covariates_swapped;
};

inline NormalizedBinary normalize_binary(const CovariateDistribution& pi,
                                         const ExperimentalMarginals& q) {
  if (pi.size() != 2 || q.size() != 2) {
    throw Error(ErrorKind::NotBinary, "case taxonomy needs exactly two covariates and two "
                                      "treatments, got " +
                                          std::to_string(pi.size()) + " and " +
                                          std::to_string(q.size()));
  }
  NormalizedBinary n{q[0], q[1], pi[0], pi[1], false, false};
  if (n.q0 > n.q1) {
    std::swap(n.q0, n.q1);
    n.treatments_swapped = true;
  }
  if (n.pa > n.pb) {
    std::swap(n.pa, n.pb);
    n.covariates_swapped = true;
  }
  return n;
}

inline bool ascending(std::array<double, 4> chain) {
  return chain[0] <= chain[1] && chain[1] <= chain[2] && chain[2] <= chain[3];
}

inline bool case_holds(int number, const NormalizedBinary& n) {
  switch (number) {
    case 1: return ascending({n.q0, n.q1, n.pa, n.pb});
    case 2: return ascending({n.q0, n.pa, n.q1, n.pb});
    case 3: return ascending({n.q0, n.pa, n.pb, n.q1});
    case 4: return ascending({n.pa, n.q0, n.q1, n.pb});
    case 5: return ascending({n.pa, n.q0, n.pb, n.q1});
    case 6: return ascending({n.pa, n.pb, n.q0, n.q1});
    default: return false;
  }
}

}  // namespace detail

/// Which ordering holds. Comparisons are exact; on a tie between adjacent
/// quantities the lowest applicable case number is reported.
inline BinaryCase classify_binary_case(const CovariateDistribution& pi,
                                       const ExperimentalMarginals& q) {
  const auto n = detail::normalize_binary(pi, q);
  for (int number = 1; number <= 6; ++number) {
    if (detail::case_holds(number, n)) {
      return BinaryCase{number, n.treatments_swapped, n.covariates_swapped};
    }
  }
  // Unreachable: after normalization one of the six chains always holds.
  throw Error(ErrorKind::CaseMismatch, "no ordering matched");
}

inline BinaryCase classify_binary_case(const Scenario& s) {
  return classify_binary_case(s.covariates(), s.marginals());
}

/// Bounds on the two covariate-dependent rules, in the caller's labels:
/// `split` is tau(0,1) (first covariate gets the first treatment) and
/// `reversed` is tau(1,0).
struct BinaryCaseBounds {
  Interval split;
  Interval reversed;
};

/// The per-case closed forms. Throws CaseMismatch when the inputs do not
/// satisfy the ordering of `case_number`.
inline BinaryCaseBounds binary_case_bounds(int case_number, const CovariateDistribution& pi,
                                           const ExperimentalMarginals& q) {
  const auto n = detail::normalize_binary(pi, q);
  if (!detail::case_holds(case_number, n)) {
    throw Error(ErrorKind::CaseMismatch,
                "inputs do not satisfy the ordering of case " + std::to_string(case_number));
  }
  const double q0 = n.q0, q1 = n.q1, a = n.pa, b = n.pb;
  BinaryCaseBounds out;
  switch (case_number) {
    case 1:
      out = {{0.0, q1 + q0}, {0.0, q1 + q0}};
      break;
    case 2:
      out = {{q1 - a, q1 + q0}, {0.0, a + q0}};
      break;
    case 3:
      out = {{q1 - a, b + q0}, {q1 - b, a + q0}};
      break;
    case 4:
      out = {{q1 - a, q1 + a}, {q0 - a, a + q0}};
      break;
    case 5:
      out = {{q1 - a, 1.0}, {q1 + q0 - 1.0, a + q0}};
      break;
    case 6:
      out = {{q1 + q0 - 1.0, 1.0}, {q1 + q0 - 1.0, 1.0}};
      break;
  }
  // Relabelling one axis exchanges tau(0,1) and tau(1,0); relabelling both is the identity.
  if (n.treatments_swapped != n.covariates_swapped) std::swap(out.split, out.reversed);
  return out;
}

inline BinaryCaseBounds binary_case_bounds(const BinaryCase& c, const CovariateDistribution& pi,
                                           const ExperimentalMarginals& q) {
  return binary_case_bounds(c.number, pi, q);
}

}  // namespace ambichoice
