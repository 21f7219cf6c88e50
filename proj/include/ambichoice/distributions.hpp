#pragma once

// Core domain types: labelled covariate and treatment spaces, the covariate
// distribution, experimental marginals, treatment rules and the full joint
// response model. All types validate on construction and are immutable
// afterwards.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ambichoice/error.hpp"

namespace ambichoice {

/// Absolute tolerance on the probability simplex and on joint/marginal agreement.
inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kConsistencyTolerance = 1e-9;
/// Default cap on |T|^|X| for rule enumeration.
inline constexpr std::size_t kDefaultRuleCap = 4096;

struct CovariateTag {
  static constexpr std::string_view noun = "covariate";
};
struct TreatmentTag {
  static constexpr std::string_view noun = "treatment";
};

/// An ordered set of distinct, non-empty labels. Order is the order given and
/// drives rule enumeration and every report.
template <class Tag>
class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
      throw Error(ErrorKind::InvalidLabels, std::string(Tag::noun) + " labels must be non-empty");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty()) {
        throw Error(ErrorKind::InvalidLabels, std::string(Tag::noun) + " label " +
                                                  std::to_string(i) + " is empty");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (labels_[i] == labels_[j]) {
          throw Error(ErrorKind::InvalidLabels,
                      "duplicate " + std::string(Tag::noun) + " label '" + labels_[i] + "'");
        }
      }
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& operator[](std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::string> labels_;
};

using CovariateSpace = LabelSet<CovariateTag>;
using TreatmentSet = LabelSet<TreatmentTag>;

namespace detail {

inline void require_probability(double value, std::string_view what) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw Error(ErrorKind::OutOfRange,
                std::string(what) + " = " + std::to_string(value) + " is outside [0,1]");
  }
}

}  // namespace detail

/// Closed interval of probabilities. Also used for identified sets of rule values.
struct Interval {
  double lb = 0.0;
  double ub = 0.0;

  double width() const noexcept { return ub - lb; }
  bool contains(double v, double tol = 0.0) const noexcept { return v >= lb - tol && v <= ub + tol; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Probability vector over a covariate space.
///
/// Masses within kSimplexTolerance of summing to one are rescaled onto the
/// simplex; anything further off is rejected with NonSimplex. Zero-mass cells
/// are allowed.
class CovariateDistribution {
 public:
  CovariateDistribution(CovariateSpace space, std::vector<double> mass)
      : space_(std::move(space)), mass_(std::move(mass)) {
    if (mass_.size() != space_.size()) {
      throw Error(ErrorKind::MissingAssignment,
                  "covariate distribution has " + std::to_string(mass_.size()) +
                      " entries for " + std::to_string(space_.size()) + " covariates");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
      detail::require_probability(mass_[i], "P(x = " + space_[i] + ")");
      total += mass_[i];
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw Error(ErrorKind::NonSimplex,
                  "covariate probabilities sum to " + std::to_string(total) + ", expected 1");
    }
    // Already-normalized input is left untouched so validation is idempotent.
    const double slack = 2.0 * static_cast<double>(mass_.size()) * DBL_EPSILON;
    if (std::abs(total - 1.0) > slack) {
      for (double& m : mass_) m /= total;
    }
  }

  const CovariateSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_.at(i); }
  std::span<const double> mass() const noexcept { return mass_; }

  /// Total mass of the cells selected by `pred(index)`. The full space has mass
  /// exactly 1 and the empty set exactly 0.
  template <class Pred>
  double mass_where(Pred pred) const {
    double total = 0.0;
    std::size_t selected = 0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
      if (pred(i)) {
        total += mass_[i];
        ++selected;
      }
    }
    if (selected == mass_.size()) return 1.0;
    return total;
  }

  friend bool operator==(const CovariateDistribution&, const CovariateDistribution&) = default;

 private:
  CovariateSpace space_;
  std::vector<double> mass_;
};

/// Success probabilities q_t = P[y(t) = 1] revealed by the experiment.
class ExperimentalMarginals {
 public:
  ExperimentalMarginals(TreatmentSet treatments, std::vector<double> success)
      : treatments_(std::move(treatments)), success_(std::move(success)) {
    if (success_.size() != treatments_.size()) {
      throw Error(ErrorKind::MissingAssignment,
                  "experimental marginals have " + std::to_string(success_.size()) +
                      " entries for " + std::to_string(treatments_.size()) + " treatments");
    }
    for (std::size_t t = 0; t < success_.size(); ++t) {
      detail::require_probability(success_[t], "P[y(" + treatments_[t] + ") = 1]");
    }
  }

  const TreatmentSet& treatments() const noexcept { return treatments_; }
  std::size_t size() const noexcept { return success_.size(); }
  double operator[](std::size_t t) const { return success_.at(t); }
  std::span<const double> success() const noexcept { return success_; }

  friend bool operator==(const ExperimentalMarginals&, const ExperimentalMarginals&) = default;

 private:
  TreatmentSet treatments_;
  std::vector<double> success_;
};

/// A deterministic rule z: X -> T, stored as treatment indices per covariate index.
class TreatmentRule {
 public:
  TreatmentRule(std::vector<std::size_t> assignment, std::size_t treatment_count)
      : assignment_(std::move(assignment)), treatment_count_(treatment_count) {
    if (assignment_.empty()) {
      throw Error(ErrorKind::MissingAssignment, "treatment rule assigns no covariates");
    }
    for (std::size_t x = 0; x < assignment_.size(); ++x) {
      if (assignment_[x] >= treatment_count_) {
        throw Error(ErrorKind::OutOfRange, "rule assigns treatment index " +
                                               std::to_string(assignment_[x]) + " with only " +
                                               std::to_string(treatment_count_) + " treatments");
      }
    }
  }

  static TreatmentRule constant(std::size_t covariate_count, std::size_t treatment,
                                std::size_t treatment_count) {
    return TreatmentRule(std::vector<std::size_t>(covariate_count, treatment), treatment_count);
  }

  std::size_t operator()(std::size_t covariate) const { return assignment_.at(covariate); }
  std::size_t covariate_count() const noexcept { return assignment_.size(); }
  std::size_t treatment_count() const noexcept { return treatment_count_; }
  std::span<const std::size_t> assignment() const noexcept { return assignment_; }

  bool is_constant() const noexcept {
    return std::all_of(assignment_.begin(), assignment_.end(),
                       [&](std::size_t t) { return t == assignment_.front(); });
  }

  friend bool operator==(const TreatmentRule&, const TreatmentRule&) = default;
  friend auto operator<=>(const TreatmentRule&, const TreatmentRule&) = default;

 private:
  std::vector<std::size_t> assignment_;
  std::size_t treatment_count_;
};

/// "tau(0,1)": treatment labels in covariate order.
inline std::string describe(const TreatmentRule& rule, const TreatmentSet& treatments) {
  std::string out = "tau(";
  for (std::size_t x = 0; x < rule.covariate_count(); ++x) {
    if (x > 0) out += ',';
    out += treatments[rule(x)];
  }
  out += ')';
  return out;
}

inline void check_rule_shape(const TreatmentRule& rule, std::size_t covariates,
                             std::size_t treatments) {
  if (rule.covariate_count() != covariates || rule.treatment_count() != treatments) {
    throw Error(ErrorKind::MissingAssignment,
                "rule is defined on " + std::to_string(rule.covariate_count()) + " covariates and " +
                    std::to_string(rule.treatment_count()) + " treatments; scenario has " +
                    std::to_string(covariates) + " and " + std::to_string(treatments));
  }
}

/// Full joint P[x, y(.)] summarized by conditional success probabilities
/// p_{t,x} = P[y(t) = 1 | x], indexed [treatment][covariate].
class JointResponseModel {
 public:
  JointResponseModel(CovariateDistribution covariates, TreatmentSet treatments,
                     std::vector<std::vector<double>> success)
      : covariates_(std::move(covariates)),
        treatments_(std::move(treatments)),
        success_(std::move(success)) {
    if (success_.size() != treatments_.size()) {
      throw Error(ErrorKind::MissingAssignment, "joint model has " +
                                                    std::to_string(success_.size()) +
                                                    " treatment rows for " +
                                                    std::to_string(treatments_.size()) +
                                                    " treatments");
    }
    for (std::size_t t = 0; t < success_.size(); ++t) {
      if (success_[t].size() != covariates_.size()) {
        throw Error(ErrorKind::MissingAssignment,
                    "joint row for treatment '" + treatments_[t] + "' has " +
                        std::to_string(success_[t].size()) + " entries for " +
                        std::to_string(covariates_.size()) + " covariates");
      }
      for (std::size_t x = 0; x < success_[t].size(); ++x) {
        detail::require_probability(success_[t][x], "P[y(" + treatments_[t] + ") = 1 | x = " +
                                                        covariates_.space()[x] + "]");
      }
    }
  }

  const CovariateDistribution& covariates() const noexcept { return covariates_; }
  const TreatmentSet& treatments() const noexcept { return treatments_; }
  double success(std::size_t t, std::size_t x) const { return success_.at(t).at(x); }
  const std::vector<std::vector<double>>& success_table() const noexcept { return success_; }

  friend bool operator==(const JointResponseModel&, const JointResponseModel&) = default;

 private:
  CovariateDistribution covariates_;
  TreatmentSet treatments_;
  std::vector<std::vector<double>> success_;
};

/// q_t = sum_x pi_x p_{t,x}.
inline ExperimentalMarginals marginalize_joint(const JointResponseModel& joint) {
  const auto& pi = joint.covariates();
  std::vector<double> q(joint.treatments().size(), 0.0);
  for (std::size_t t = 0; t < q.size(); ++t) {
    for (std::size_t x = 0; x < pi.size(); ++x) q[t] += pi[x] * joint.success(t, x);
    q[t] = std::clamp(q[t], 0.0, 1.0);
  }
  return ExperimentalMarginals(joint.treatments(), std::move(q));
}

/// Mean outcome of `rule` when the joint is known: sum_x pi_x p_{z(x),x}.
inline double true_rule_value(const JointResponseModel& joint, const TreatmentRule& rule) {
  const auto& pi = joint.covariates();
  check_rule_shape(rule, pi.size(), joint.treatments().size());
  double value = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) value += pi[x] * joint.success(rule(x), x);
  return std::clamp(value, 0.0, 1.0);
}

/// A validated analysis problem. The joint, when present, reproduces the
/// stated marginals within kConsistencyTolerance.
class Scenario {
 public:
  Scenario(CovariateDistribution covariates, ExperimentalMarginals marginals,
           std::optional<JointResponseModel> joint = std::nullopt, std::string name = {})
      : covariates_(std::move(covariates)),
        marginals_(std::move(marginals)),
        joint_(std::move(joint)),
        name_(std::move(name)) {
    if (!joint_) return;
    if (!(joint_->covariates().space() == covariates_.space()) ||
        !(joint_->treatments() == marginals_.treatments())) {
      throw Error(ErrorKind::InconsistentJoint, "joint model labels differ from the scenario's");
    }
    for (std::size_t x = 0; x < covariates_.size(); ++x) {
      if (std::abs(joint_->covariates()[x] - covariates_[x]) > kConsistencyTolerance) {
        throw Error(ErrorKind::InconsistentJoint,
                    "joint covariate mass differs at '" + covariates_.space()[x] + "'");
      }
    }
    const auto implied = marginalize_joint(*joint_);
    for (std::size_t t = 0; t < marginals_.size(); ++t) {
      if (std::abs(implied[t] - marginals_[t]) > kConsistencyTolerance) {
        throw Error(ErrorKind::InconsistentJoint,
                    "joint implies P[y(" + marginals_.treatments()[t] +
                        ") = 1] = " + std::to_string(implied[t]) + " but the experiment reports " +
                        std::to_string(marginals_[t]));
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  const CovariateDistribution& covariates() const noexcept { return covariates_; }
  const CovariateSpace& covariate_space() const noexcept { return covariates_.space(); }
  const ExperimentalMarginals& marginals() const noexcept { return marginals_; }
  const TreatmentSet& treatments() const noexcept { return marginals_.treatments(); }
  const std::optional<JointResponseModel>& joint() const noexcept { return joint_; }

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  CovariateDistribution covariates_;
  ExperimentalMarginals marginals_;
  std::optional<JointResponseModel> joint_;
  std::string name_;
};

/// Unvalidated scenario content, keyed by label. Label order comes from the
/// two lists.
struct RawScenario {
  std::string name;
  std::vector<std::string> treatments;
  std::vector<std::string> covariates;
  std::map<std::string, double> covariate_distribution;
  std::map<std::string, double> experimental_marginals;
  std::optional<std::map<std::string, std::map<std::string, double>>> joint;
};

namespace detail {

template <class Tag>
std::vector<double> lookup_all(const LabelSet<Tag>& labels, const std::map<std::string, double>& values,
                               std::string_view field) {
  for (const auto& [key, _] : values) {
    if (!labels.index_of(key)) {
      throw Error(ErrorKind::UnknownLabel,
                  std::string(field) + " names unknown " + std::string(Tag::noun) + " '" + key + "'");
    }
  }
  std::vector<double> out;
  out.reserve(labels.size());
  for (const auto& label : labels.labels()) {
    auto it = values.find(label);
    if (it == values.end()) {
      throw Error(ErrorKind::MissingAssignment,
                  std::string(field) + " has no entry for " + std::string(Tag::noun) + " '" + label + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace detail

inline Scenario validate_scenario(const RawScenario& raw) {
  CovariateSpace space(raw.covariates);
  TreatmentSet treatments(raw.treatments);
  CovariateDistribution pi(space, detail::lookup_all(space, raw.covariate_distribution,
                                                     "covariate_distribution"));
  ExperimentalMarginals q(treatments, detail::lookup_all(treatments, raw.experimental_marginals,
                                                         "experimental_marginals"));
  std::optional<JointResponseModel> joint;
  if (raw.joint) {
    for (const auto& [key, _] : *raw.joint) {
      if (!treatments.index_of(key)) {
        throw Error(ErrorKind::UnknownLabel, "joint names unknown treatment '" + key + "'");
      }
    }
    std::vector<std::vector<double>> rows;
    for (const auto& t : treatments.labels()) {
      auto it = raw.joint->find(t);
      if (it == raw.joint->end()) {
        throw Error(ErrorKind::MissingAssignment, "joint has no row for treatment '" + t + "'");
      }
      rows.push_back(detail::lookup_all(space, it->second, "joint." + t));
    }
    joint.emplace(pi, treatments, std::move(rows));
  }
  return Scenario(std::move(pi), std::move(q), std::move(joint), raw.name);
}

/// Inverse of validate_scenario.
inline RawScenario to_raw(const Scenario& s) {
  RawScenario raw;
  raw.name = s.name();
  raw.treatments = s.treatments().labels();
  raw.covariates = s.covariate_space().labels();
  for (std::size_t x = 0; x < s.covariates().size(); ++x) {
    raw.covariate_distribution[raw.covariates[x]] = s.covariates()[x];
  }
  for (std::size_t t = 0; t < s.marginals().size(); ++t) {
    raw.experimental_marginals[raw.treatments[t]] = s.marginals()[t];
  }
  if (s.joint()) {
    raw.joint.emplace();
    for (std::size_t t = 0; t < raw.treatments.size(); ++t) {
      auto& row = (*raw.joint)[raw.treatments[t]];
      for (std::size_t x = 0; x < raw.covariates.size(); ++x) {
        row[raw.covariates[x]] = s.joint()->success(t, x);
      }
    }
  }
  return raw;
}

/// Number of rules |T|^|X|, or nullopt when it exceeds `cap`.
inline std::optional<std::size_t> rule_count(std::size_t covariates, std::size_t treatments,
                                             std::size_t cap = kDefaultRuleCap) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < covariates; ++i) {
    if (treatments != 0 && count > cap / treatments) return std::nullopt;
    count *= treatments;
  }
  if (count > cap) return std::nullopt;
  return count;
}

/// Every total map X -> T, lexicographic with the first covariate most
/// significant.
inline std::vector<TreatmentRule> enumerate_rules(const CovariateSpace& covariates,
                                                  const TreatmentSet& treatments,
                                                  std::size_t cap = kDefaultRuleCap) {
  const auto count = rule_count(covariates.size(), treatments.size(), cap);
  if (!count) {
    throw Error(ErrorKind::SizeLimit, std::to_string(treatments.size()) + "^" +
                                          std::to_string(covariates.size()) +
                                          " rules exceed the cap of " + std::to_string(cap));
  }
  std::vector<TreatmentRule> rules;
  rules.reserve(*count);
  std::vector<std::size_t> digits(covariates.size(), 0);
  for (std::size_t n = 0; n < *count; ++n) {
    rules.emplace_back(digits, treatments.size());
    for (std::size_t x = digits.size(); x-- > 0;) {
      if (++digits[x] < treatments.size()) break;
      digits[x] = 0;
    }
  }
  return rules;
}

inline std::vector<TreatmentRule> enumerate_rules(const Scenario& s,
                                                  std::size_t cap = kDefaultRuleCap) {
  return enumerate_rules(s.covariate_space(), s.treatments(), cap);
}

}  // namespace ambichoice
