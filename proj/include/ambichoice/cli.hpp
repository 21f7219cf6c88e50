#pragma once

// Command dispatch for the ambichoice tool. `run` is stream-based so the
// commands can be exercised in-process.
//
// Exit status: 0 success, 1 usage or validation error, 2 verification failure.

#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ambichoice/bounds.hpp"
#include "ambichoice/distributions.hpp"
#include "ambichoice/dominance.hpp"
#include "ambichoice/oracle.hpp"
#include "ambichoice/planner.hpp"
#include "ambichoice/report.hpp"
#include "ambichoice/scenario_io.hpp"
#include "json.hpp"

namespace ambichoice::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitVerifyFailed = 2;

enum class Format { human, machine };

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  std::size_t samples = 200;
};

/// Oracle cross-checks on one scenario: sharpness of every rule's bounds,
/// exactness of every pairwise dominance relation, and coverage of randomly
/// drawn consistent worlds (plus the stated joint, when present).
inline std::vector<CheckResult> verify_scenario(const Scenario& s, const VerifyOptions& opts) {
  std::vector<CheckResult> checks;
  const auto rules = enumerate_rules(s);
  const auto& q = s.marginals();
  const auto name_of = [&](const TreatmentRule& r) { return describe(r, s.treatments()); };

  for (const auto& rule : rules) {
    const auto rep = oracle::verify_sharpness(s, rule);
    bool witnesses_ok = true;
    for (const auto* world : {&rep.lower_world, &rep.upper_world}) {
      const auto implied = marginalize_joint(*world);
      for (std::size_t t = 0; t < q.size(); ++t) {
        witnesses_ok = witnesses_ok && std::abs(implied[t] - q[t]) <= 1e-12;
      }
    }
    witnesses_ok = witnesses_ok &&
                   std::abs(true_rule_value(rep.lower_world, rule) - rep.oracle.lb) <= 1e-9 &&
                   std::abs(true_rule_value(rep.upper_world, rule) - rep.oracle.ub) <= 1e-9;
    checks.push_back({"sharpness " + name_of(rule), rep.pass && witnesses_ok,
                      "closed [" + detail::fixed(rep.closed_form.lb, 6) + ", " +
                          detail::fixed(rep.closed_form.ub, 6) + "] oracle [" +
                          detail::fixed(rep.oracle.lb, 6) + ", " + detail::fixed(rep.oracle.ub, 6) +
                          "]"});
  }

  std::size_t pairs = 0, mismatches = 0;
  std::string first_mismatch;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      ++pairs;
      const auto fast = relate(rules[i], rules[j], s);
      const auto exact = oracle::verify_dominance(s, rules[i], rules[j]);
      if (fast != exact) {
        if (mismatches++ == 0) {
          first_mismatch = name_of(rules[i]) + " vs " + name_of(rules[j]) + ": " +
                           std::string(to_string(fast)) + " != " + std::string(to_string(exact));
        }
      }
    }
  }
  checks.push_back({"dominance", mismatches == 0,
                    std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches" +
                        (first_mismatch.empty() ? "" : " (" + first_mismatch + ")")});

  if (s.covariates().size() == 2 && s.treatments().size() == 2) {
    const auto c = classify_binary_case(s);
    const auto cb = binary_case_bounds(c, s.covariates(), q);
    const Interval split = rule_value_bounds(s, TreatmentRule({0, 1}, 2));
    const Interval reversed = rule_value_bounds(s, TreatmentRule({1, 0}, 2));
    const auto close = [](const Interval& a, const Interval& b) {
      return std::abs(a.lb - b.lb) <= 1e-12 && std::abs(a.ub - b.ub) <= 1e-12;
    };
    checks.push_back({"case formulas", close(cb.split, split) && close(cb.reversed, reversed),
                      "Case " + std::to_string(c.number)});
  }

  std::mt19937_64 rng(opts.seed);
  std::size_t violations = 0;
  for (std::size_t k = 0; k < opts.samples; ++k) {
    const auto world = oracle::sample_consistent_world(s, rng);
    for (const auto& rule : rules) {
      if (!rule_value_bounds(s, rule).contains(true_rule_value(world, rule), 1e-9)) ++violations;
    }
  }
  checks.push_back({"coverage", violations == 0,
                    std::to_string(opts.samples) + " sampled worlds (seed " +
                        std::to_string(opts.seed) + "), " + std::to_string(violations) +
                        " violations"});

  if (s.joint()) {
    std::size_t outside = 0;
    for (const auto& rule : rules) {
      if (!rule_value_bounds(s, rule).contains(true_rule_value(*s.joint(), rule), 1e-9)) ++outside;
    }
    checks.push_back({"stated joint", outside == 0,
                      std::to_string(outside) + " rules with values outside their bounds"});
  }
  return checks;
}

namespace detail {

inline std::string two(double v) { return ambichoice::detail::fixed(v, 2); }

inline void print_demo(const Scenario& s, std::ostream& out) {
  const auto c = classify_binary_case(s);
  const auto partition = dominance_partition(s);
  out << "P(x=a) = " << two(s.covariates()[0]) << ", P(x=b) = " << two(s.covariates()[1])
      << ", P[y(0)=1] = " << two(s.marginals()[0]) << ", P[y(1)=1] = " << two(s.marginals()[1])
      << ": Case " << c.number << '\n';
  for (const auto& a : partition.rules) {
    out << "  " << describe(a.rule, s.treatments()) << "  ";
    if (a.rule.is_constant()) {
      out << "known value " << two(a.bounds.lb);
    } else {
      out << "[" << two(a.bounds.lb) << ", " << two(a.bounds.ub) << "]";
    }
    if (a.dominated) {
      out << "  dominated by";
      for (std::size_t j : a.dominated_by) out << ' ' << describe(partition.rules[j].rule, s.treatments());
    } else {
      out << "  undominated";
    }
    if (a.maximin) out << "  maximin";
    out << '\n';
  }
}

inline nlohmann::ordered_json checks_to_json(const std::vector<CheckResult>& checks) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) arr.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return arr;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds, dominance and maximin analysis of covariate-based treatment rules "
               "from covariate-free experimental outcomes"};
  app.require_subcommand(1);

  std::string path;
  std::string format_name = "human";
  VerifyOptions verify_opts;
  std::string demo_name;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", path, "Scenario file (JSON)")->required();
    sub->add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"human", "machine"}));
  };
  auto* bounds_cmd = app.add_subcommand("bounds", "Identified set of every rule's mean outcome");
  add_common(bounds_cmd);
  auto* dominance_cmd = app.add_subcommand("dominance", "Dominated/undominated partition and maximin rule");
  add_common(dominance_cmd);
  auto* classify_cmd = app.add_subcommand("classify", "Ordering case of a two-by-two scenario");
  add_common(classify_cmd);
  auto* planner_cmd = app.add_subcommand("planner", "Full-knowledge benchmark (needs a joint)");
  add_common(planner_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "Oracle cross-checks; exit 2 on any failure");
  add_common(verify_cmd);
  verify_cmd->add_option("--seed", verify_opts.seed, "Seed for the sampled-world coverage check");
  verify_cmd->add_option("--samples", verify_opts.samples, "Number of sampled worlds");
  auto* demo_cmd = app.add_subcommand("demo", "Bundled case studies");
  demo_cmd->add_option("name", demo_name, "Case study")->required()->check(CLI::IsMember({"perry"}));
  demo_cmd->add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"human", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  const Format format = format_name == "machine" ? Format::machine : Format::human;

  try {
    if (demo_cmd->parsed()) {
      const Scenario half = perry_scenario(0.5, "perry_half");
      const Scenario ninety = perry_scenario(0.1, "perry_ninety");
      if (format == Format::machine) {
        out << nlohmann::ordered_json::array({report_to_json(build_report(half)),
                                              report_to_json(build_report(ninety))})
                   .dump(2)
            << '\n';
      } else {
        out << "Perry Preschool: high-school graduation by age 19, treatment 1 = preschool\n\n";
        detail::print_demo(half, out);
        out << '\n';
        detail::print_demo(ninety, out);
      }
      return kExitOk;
    }

    const Scenario s = parse_scenario(path);

    if (bounds_cmd->parsed() || dominance_cmd->parsed()) {
      const auto doc = build_report(s);
      if (format == Format::machine) {
        out << report_to_json(doc).dump(2) << '\n';
      } else {
        out << render_human(doc, dominance_cmd->parsed());
      }
      return kExitOk;
    }

    if (classify_cmd->parsed()) {
      const auto c = classify_binary_case(s);
      if (format == Format::machine) {
        out << nlohmann::ordered_json{{"case", c.number},
                                      {"treatments_swapped", c.treatments_swapped},
                                      {"covariates_swapped", c.covariates_swapped}}
                   .dump(2)
            << '\n';
      } else {
        out << "Case " << c.number << '\n';
      }
      return kExitOk;
    }

    if (planner_cmd->parsed()) {
      if (!s.joint()) {
        err << "planner: scenario '" << path << "' has no joint model\n";
        return kExitInvalid;
      }
      const auto best = optimal_rule(*s.joint());
      const double worst = worst_case_value(*s.joint());
      const auto blind = jensen_check(*s.joint(), Coarsening::collapse_all(s.covariate_space()));
      if (format == Format::machine) {
        out << nlohmann::ordered_json{{"optimal_rule", describe(best.rule, s.treatments())},
                                      {"optimal_value", best.value},
                                      {"worst_case_value", worst},
                                      {"covariate_blind_optimal_value", blind.coarse_optimum},
                                      {"covariate_blind_worst_case_value", blind.coarse_worst}}
                   .dump(2)
            << '\n';
      } else {
        out << "optimal rule: " << describe(best.rule, s.treatments()) << '\n'
            << "optimal value: " << ambichoice::detail::fixed(best.value, 4) << '\n'
            << "worst-case value: " << ambichoice::detail::fixed(worst, 4) << '\n'
            << "ignoring covariates: optimal " << ambichoice::detail::fixed(blind.coarse_optimum, 4)
            << ", worst " << ambichoice::detail::fixed(blind.coarse_worst, 4) << '\n';
      }
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      const auto checks = verify_scenario(s, verify_opts);
      bool all = true;
      for (const auto& c : checks) all = all && c.pass;
      if (format == Format::machine) {
        out << nlohmann::ordered_json{{"pass", all}, {"checks", detail::checks_to_json(checks)}}.dump(2)
            << '\n';
      } else {
        for (const auto& c : checks) {
          out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        }
      }
      return all ? kExitOk : kExitVerifyFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace ambichoice::cli
