#pragma once

// Report documents for the CLI. The machine rendering is JSON with doubles
// written at round-trip precision; the human rendering is a fixed-width table
// with four decimals.

#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ambichoice/bounds.hpp"
#include "ambichoice/dominance.hpp"
#include "ambichoice/scenario_io.hpp"
#include "json.hpp"

namespace ambichoice {

struct ReportRow {
  std::string rule;                     // "tau(0,1)"
  std::vector<std::string> assignment;  // treatment label per covariate
  double lb = 0.0;
  double ub = 0.0;
  bool dominated = false;
  std::vector<std::string> dominated_by;
  bool maximin = false;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportDocument {
  std::string name;
  std::vector<std::string> covariates;
  std::vector<std::string> treatments;
  std::vector<double> covariate_distribution;
  std::vector<double> experimental_marginals;
  std::optional<int> binary_case;
  std::vector<ReportRow> rows;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

inline ReportDocument build_report(const Scenario& s, std::size_t cap = kDefaultRuleCap) {
  ReportDocument doc;
  doc.name = s.name();
  doc.covariates = s.covariate_space().labels();
  doc.treatments = s.treatments().labels();
  doc.covariate_distribution.assign(s.covariates().mass().begin(), s.covariates().mass().end());
  doc.experimental_marginals.assign(s.marginals().success().begin(), s.marginals().success().end());
  if (s.covariates().size() == 2 && s.treatments().size() == 2) {
    doc.binary_case = classify_binary_case(s).number;
  }
  const auto partition = dominance_partition(s, cap);
  for (const auto& a : partition.rules) {
    ReportRow row;
    row.rule = describe(a.rule, s.treatments());
    for (std::size_t x = 0; x < a.rule.covariate_count(); ++x) {
      row.assignment.push_back(s.treatments()[a.rule(x)]);
    }
    row.lb = a.bounds.lb;
    row.ub = a.bounds.ub;
    row.dominated = a.dominated;
    for (std::size_t j : a.dominated_by) {
      row.dominated_by.push_back(describe(partition.rules[j].rule, s.treatments()));
    }
    row.maximin = a.maximin;
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

inline nlohmann::ordered_json report_to_json(const ReportDocument& doc) {
  nlohmann::ordered_json out;
  out["name"] = doc.name;
  out["covariates"] = doc.covariates;
  out["treatments"] = doc.treatments;
  out["covariate_distribution"] = doc.covariate_distribution;
  out["experimental_marginals"] = doc.experimental_marginals;
  out["binary_case"] = doc.binary_case ? nlohmann::ordered_json(*doc.binary_case) : nullptr;
  auto& rows = out["rules"] = nlohmann::ordered_json::array();
  for (const auto& r : doc.rows) {
    rows.push_back({{"rule", r.rule},
                    {"assignment", r.assignment},
                    {"lb", r.lb},
                    {"ub", r.ub},
                    {"dominated", r.dominated},
                    {"dominated_by", r.dominated_by},
                    {"maximin", r.maximin}});
  }
  return out;
}

inline ReportDocument report_from_json(const nlohmann::json& in) {
  try {
    ReportDocument doc;
    doc.name = in.at("name").get<std::string>();
    doc.covariates = in.at("covariates").get<std::vector<std::string>>();
    doc.treatments = in.at("treatments").get<std::vector<std::string>>();
    doc.covariate_distribution = in.at("covariate_distribution").get<std::vector<double>>();
    doc.experimental_marginals = in.at("experimental_marginals").get<std::vector<double>>();
    if (!in.at("binary_case").is_null()) doc.binary_case = in.at("binary_case").get<int>();
    for (const auto& r : in.at("rules")) {
      doc.rows.push_back(ReportRow{r.at("rule").get<std::string>(),
                                   r.at("assignment").get<std::vector<std::string>>(),
                                   r.at("lb").get<double>(), r.at("ub").get<double>(),
                                   r.at("dominated").get<bool>(),
                                   r.at("dominated_by").get<std::vector<std::string>>(),
                                   r.at("maximin").get<bool>()});
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
  }
}

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace detail

inline std::string render_human(const ReportDocument& doc, bool show_dominance = true) {
  std::ostringstream out;
  if (!doc.name.empty()) out << "scenario: " << doc.name << '\n';
  out << "covariates:";
  for (std::size_t x = 0; x < doc.covariates.size(); ++x) {
    out << "  P(x=" << doc.covariates[x] << ")=" << detail::fixed(doc.covariate_distribution[x], 4);
  }
  out << "\ntreatments:";
  for (std::size_t t = 0; t < doc.treatments.size(); ++t) {
    out << "  P[y(" << doc.treatments[t] << ")=1]=" << detail::fixed(doc.experimental_marginals[t], 4);
  }
  out << '\n';
  if (doc.binary_case) out << "ordering: Case " << *doc.binary_case << '\n';
  out << '\n';
  for (const auto& r : doc.rows) {
    out << r.rule << "  [" << detail::fixed(r.lb, 4) << ", " << detail::fixed(r.ub, 4) << "]";
    if (show_dominance) {
      if (r.dominated) {
        out << "  dominated by " << detail::join(r.dominated_by, ", ");
      } else {
        out << "  undominated";
      }
      if (r.maximin) out << "  maximin";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ambichoice
