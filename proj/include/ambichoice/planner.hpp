#pragma once

// Full-knowledge benchmark: what a planner who knows P[y(t) = 1 | x] can
// achieve, what the worst rule would yield, and how both move when the
// covariate is coarsened.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ambichoice/distributions.hpp"

namespace ambichoice {

struct OptimalRule {
  TreatmentRule rule;
  double value;
};

/// Cell-wise argmax of p_{t,x}, ties to the lowest-ordered treatment.
inline OptimalRule optimal_rule(const JointResponseModel& joint) {
  const auto& pi = joint.covariates();
  const std::size_t nt = joint.treatments().size();
  std::vector<std::size_t> best(pi.size(), 0);
  double value = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) {
    for (std::size_t t = 1; t < nt; ++t) {
      if (joint.success(t, x) > joint.success(best[x], x)) best[x] = t;
    }
    value += pi[x] * joint.success(best[x], x);
  }
  return {TreatmentRule(std::move(best), nt), std::clamp(value, 0.0, 1.0)};
}

/// E{min_t E[y(t) | x]}: the value of the worst feasible rule.
inline double worst_case_value(const JointResponseModel& joint) {
  const auto& pi = joint.covariates();
  double value = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) {
    double worst = joint.success(0, x);
    for (std::size_t t = 1; t < joint.treatments().size(); ++t) {
      worst = std::min(worst, joint.success(t, x));
    }
    value += pi[x] * worst;
  }
  return std::clamp(value, 0.0, 1.0);
}

/// A many-to-one map from covariate cells to coarse cells. Coarse labels are
/// ordered by first appearance.
class Coarsening {
 public:
  Coarsening(const CovariateSpace& fine, const std::vector<std::string>& coarse_of_fine)
      : fine_(fine) {
    if (coarse_of_fine.size() != fine.size()) {
      throw Error(ErrorKind::MissingAssignment,
                  "coarsening maps " + std::to_string(coarse_of_fine.size()) + " of " +
                      std::to_string(fine.size()) + " covariates");
    }
    std::vector<std::string> labels;
    for (const auto& c : coarse_of_fine) {
      auto it = std::find(labels.begin(), labels.end(), c);
      if (it == labels.end()) {
        cell_of_.push_back(labels.size());
        labels.push_back(c);
      } else {
        cell_of_.push_back(static_cast<std::size_t>(it - labels.begin()));
      }
    }
    coarse_labels_ = std::move(labels);
    CovariateSpace check(coarse_labels_);  // rejects empty labels
  }

  Coarsening(const CovariateSpace& fine, const std::map<std::string, std::string>& mapping)
      : Coarsening(fine, ordered(fine, mapping)) {}

  static Coarsening identity(const CovariateSpace& fine) { return Coarsening(fine, fine.labels()); }
  static Coarsening collapse_all(const CovariateSpace& fine, const std::string& label = "all") {
    return Coarsening(fine, std::vector<std::string>(fine.size(), label));
  }

  const CovariateSpace& fine() const noexcept { return fine_; }
  const std::vector<std::string>& coarse_labels() const noexcept { return coarse_labels_; }
  std::size_t cell_of(std::size_t fine_index) const { return cell_of_.at(fine_index); }

 private:
  static std::vector<std::string> ordered(const CovariateSpace& fine,
                                          const std::map<std::string, std::string>& mapping) {
    std::vector<std::string> out;
    for (const auto& label : fine.labels()) {
      auto it = mapping.find(label);
      if (it == mapping.end()) {
        throw Error(ErrorKind::MissingAssignment, "coarsening has no cell for '" + label + "'");
      }
      out.push_back(it->second);
    }
    return out;
  }

  CovariateSpace fine_;
  std::vector<std::string> coarse_labels_;
  std::vector<std::size_t> cell_of_;
};

/// The joint seen by a planner who observes only w(x). Coarse cells with zero
/// mass are dropped since their conditional means are undefined.
inline JointResponseModel coarsen(const JointResponseModel& joint, const Coarsening& w) {
  const auto& pi = joint.covariates();
  if (!(w.fine() == pi.space())) {
    throw Error(ErrorKind::MissingAssignment, "coarsening is defined on a different covariate space");
  }
  const std::size_t cells = w.coarse_labels().size();
  const std::size_t nt = joint.treatments().size();
  std::vector<double> mass(cells, 0.0);
  std::vector<std::vector<double>> weighted(nt, std::vector<double>(cells, 0.0));
  for (std::size_t x = 0; x < pi.size(); ++x) {
    const std::size_t c = w.cell_of(x);
    mass[c] += pi[x];
    for (std::size_t t = 0; t < nt; ++t) weighted[t][c] += pi[x] * joint.success(t, x);
  }

  std::vector<std::string> labels;
  std::vector<double> kept_mass;
  std::vector<std::vector<double>> success(nt);
  for (std::size_t c = 0; c < cells; ++c) {
    if (mass[c] <= 0.0) continue;
    labels.push_back(w.coarse_labels()[c]);
    kept_mass.push_back(std::min(mass[c], 1.0));
    for (std::size_t t = 0; t < nt; ++t) {
      success[t].push_back(std::clamp(weighted[t][c] / mass[c], 0.0, 1.0));
    }
  }
  CovariateDistribution coarse(CovariateSpace(std::move(labels)), std::move(kept_mass));
  return JointResponseModel(std::move(coarse), joint.treatments(), std::move(success));
}

/// Optimal and worst-case values with fine and coarse covariates. Finer
/// information never lowers the optimum and never raises the worst case.
struct JensenComparison {
  double fine_optimum;
  double coarse_optimum;
  double fine_worst;
  double coarse_worst;
};

inline JensenComparison jensen_check(const JointResponseModel& joint, const Coarsening& w) {
  const auto coarse = coarsen(joint, w);
  return {optimal_rule(joint).value, optimal_rule(coarse).value, worst_case_value(joint),
          worst_case_value(coarse)};
}

}  // namespace ambichoice
