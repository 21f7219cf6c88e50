#pragma once

// Brute-force certification. The feasible conditional means for one treatment
// form the polytope {p in [0,1]^X : sum_x pi_x p_x = q}. Its vertices have every
// coordinate at 0 or 1 except at most one, so a linear objective is extremized
// by checking all |X| * 2^(|X|-1) candidates. Nothing here reuses the closed
// forms of the bounds or dominance modules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ambichoice/bounds.hpp"
#include "ambichoice/distributions.hpp"
#include "ambichoice/dominance.hpp"

namespace ambichoice::oracle {

inline constexpr std::size_t kDefaultCovariateCap = 16;
inline constexpr double kVertexTolerance = 1e-12;
inline constexpr double kSharpnessTolerance = 1e-9;

struct Extrema {
  double min;
  double max;
  std::vector<double> argmin;  // vertex attaining min
  std::vector<double> argmax;  // vertex attaining max
};

/// Exact extrema of sum_x c_x pi_x p_x over the feasible polytope of one treatment.
inline Extrema vertex_extremize(const CovariateDistribution& pi, double q,
                                std::span<const double> coefficients,
                                std::size_t cap = kDefaultCovariateCap) {
  const std::size_t n = pi.size();
  if (n > cap) {
    throw Error(ErrorKind::SizeLimit, std::to_string(n) + " covariates exceed the oracle cap of " +
                                          std::to_string(cap));
  }
  if (coefficients.size() != n) {
    throw Error(ErrorKind::MissingAssignment, "objective has " + std::to_string(coefficients.size()) +
                                                  " coefficients for " + std::to_string(n) +
                                                  " covariates");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorKind::Infeasible, "target " + std::to_string(q) + " is outside [0,1]");
  }

  Extrema out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              {}, {}};
  std::vector<double> p(n, 0.0);
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  for (std::size_t free = 0; free < n; ++free) {
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
      double fixed = 0.0;
      for (std::size_t x = 0, bit = 0; x < n; ++x) {
        if (x == free) continue;
        p[x] = ((bits >> bit++) & 1U) ? 1.0 : 0.0;
        fixed += pi[x] * p[x];
      }
      const double residual = q - fixed;
      if (pi[free] > 0.0) {
        const double value = residual / pi[free];
        if (value < -kVertexTolerance || value > 1.0 + kVertexTolerance) continue;
        p[free] = std::min(1.0, std::max(0.0, value));
      } else {
        if (std::abs(residual) > kVertexTolerance) continue;
        p[free] = 0.0;
      }
      double objective = 0.0;
      for (std::size_t x = 0; x < n; ++x) objective += coefficients[x] * pi[x] * p[x];
      if (objective < out.min) {
        out.min = objective;
        out.argmin = p;
      }
      if (objective > out.max) {
        out.max = objective;
        out.argmax = p;
      }
    }
  }
  if (out.argmax.empty()) {
    throw Error(ErrorKind::Infeasible, "no vertex reproduces target " + std::to_string(q));
  }
  return out;
}

struct SharpnessReport {
  Interval closed_form;
  Interval oracle;
  bool pass;
  JointResponseModel lower_world;  // attains oracle.lb
  JointResponseModel upper_world;  // attains oracle.ub
};

/// Composes per-treatment extrema into the rule-value extrema and compares
/// them with rule_value_bounds.
inline SharpnessReport verify_sharpness(const Scenario& s, const TreatmentRule& rule,
                                        std::size_t cap = kDefaultCovariateCap) {
  const auto& pi = s.covariates();
  const auto& q = s.marginals();
  check_rule_shape(rule, pi.size(), q.size());
  Interval extremes;
  std::vector<std::vector<double>> low(q.size()), high(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    std::vector<double> c(pi.size());
    for (std::size_t x = 0; x < c.size(); ++x) c[x] = rule(x) == t ? 1.0 : 0.0;
    auto e = vertex_extremize(pi, q[t], c, cap);
    extremes.lb += e.min;
    extremes.ub += e.max;
    low[t] = std::move(e.argmin);
    high[t] = std::move(e.argmax);
  }
  const Interval closed = rule_value_bounds(s, rule);
  const bool pass = std::abs(closed.lb - extremes.lb) <= kSharpnessTolerance &&
                    std::abs(closed.ub - extremes.ub) <= kSharpnessTolerance;
  return {closed, extremes, pass, JointResponseModel(pi, s.treatments(), std::move(low)),
          JointResponseModel(pi, s.treatments(), std::move(high))};
}

struct DominanceCheck {
  double forward;   // max of M_z - M_z'
  double backward;  // max of M_z' - M_z
  PairRelation relation;
};

/// Relation of z to z' from exact per-treatment extrema of M_z - M_z'.
inline DominanceCheck verify_dominance_detail(const Scenario& s, const TreatmentRule& z,
                                              const TreatmentRule& zp,
                                              std::size_t cap = kDefaultCovariateCap) {
  const auto& pi = s.covariates();
  const auto& q = s.marginals();
  check_rule_shape(z, pi.size(), q.size());
  check_rule_shape(zp, pi.size(), q.size());
  double hi = 0.0, lo = 0.0;
  for (std::size_t t = 0; t < q.size(); ++t) {
    std::vector<double> c(pi.size());
    for (std::size_t x = 0; x < c.size(); ++x) {
      c[x] = (z(x) == t ? 1.0 : 0.0) - (zp(x) == t ? 1.0 : 0.0);
    }
    const auto e = vertex_extremize(pi, q[t], c, cap);
    hi += e.max;
    lo += e.min;
  }
  return {hi, -lo, relation_from_gaps(hi, -lo)};
}

inline PairRelation verify_dominance(const Scenario& s, const TreatmentRule& z,
                                     const TreatmentRule& zp,
                                     std::size_t cap = kDefaultCovariateCap) {
  return verify_dominance_detail(s, z, zp, cap).relation;
}

/// A random joint consistent with the scenario: for each treatment, a random
/// convex combination of polytope vertices picked by random linear objectives.
template <class Rng>
JointResponseModel sample_consistent_world(const Scenario& s, Rng& rng, std::size_t vertices = 3,
                                           std::size_t cap = kDefaultCovariateCap) {
  const auto& pi = s.covariates();
  const auto& q = s.marginals();
  std::uniform_real_distribution<double> coefficient(-1.0, 1.0);
  std::exponential_distribution<double> weight(1.0);
  std::vector<std::vector<double>> table(q.size(), std::vector<double>(pi.size(), 0.0));
  for (std::size_t t = 0; t < q.size(); ++t) {
    double total = 0.0;
    for (std::size_t k = 0; k < vertices; ++k) {
      std::vector<double> c(pi.size());
      for (double& v : c) v = coefficient(rng);
      const auto vertex = vertex_extremize(pi, q[t], c, cap).argmax;
      const double w = weight(rng);
      total += w;
      for (std::size_t x = 0; x < pi.size(); ++x) table[t][x] += w * vertex[x];
    }
    for (double& v : table[t]) v = std::min(1.0, std::max(0.0, v / total));
  }
  return JointResponseModel(pi, s.treatments(), std::move(table));
}

}  // namespace ambichoice::oracle
