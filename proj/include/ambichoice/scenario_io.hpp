#pragma once

// Scenario files are JSON documents:
//
//   {
//     "name": "perry_half",
//     "treatments": ["0", "1"],
//     "covariates": ["a", "b"],
//     "covariate_distribution": {"a": 0.5, "b": 0.5},
//     "experimental_marginals": {"0": 0.49, "1": 0.67},
//     "joint": {"0": {"a": 0.98, "b": 0.0}, "1": {"a": 0.34, "b": 1.0}}
//   }
//
// "name" and "joint" are optional. Numbers are read as decimal doubles with
// correct rounding.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "ambichoice/distributions.hpp"
#include "json.hpp"

namespace ambichoice {

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline std::vector<std::string> read_labels(const nlohmann::json& doc, const std::string& field) {
  if (!doc.contains(field)) throw Error(ErrorKind::ParseError, "missing field '" + field + "'");
  const auto& node = doc.at(field);
  if (!node.is_array()) throw Error(ErrorKind::ParseError, "field '" + field + "' must be a list");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_string()) {
      throw Error(ErrorKind::ParseError,
                  "field '" + field + "[" + std::to_string(i) + "]' must be a string");
    }
    out.push_back(node[i].get<std::string>());
  }
  return out;
}

inline std::map<std::string, double> read_numbers(const nlohmann::json& node, const std::string& field) {
  if (!node.is_object()) {
    throw Error(ErrorKind::ParseError, "field '" + field + "' must map labels to numbers");
  }
  std::map<std::string, double> out;
  for (const auto& [key, value] : node.items()) {
    if (!value.is_number()) {
      throw Error(ErrorKind::ParseError, "field '" + field + "." + key + "' must be a number");
    }
    out[key] = value.get<double>();
  }
  return out;
}

}  // namespace detail

inline RawScenario raw_scenario_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "scenario must be a JSON object");
  RawScenario raw;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw Error(ErrorKind::ParseError, "field 'name' must be a string");
    raw.name = doc["name"].get<std::string>();
  }
  raw.treatments = detail::read_labels(doc, "treatments");
  raw.covariates = detail::read_labels(doc, "covariates");
  for (const char* field : {"covariate_distribution", "experimental_marginals"}) {
    if (!doc.contains(field)) {
      throw Error(ErrorKind::ParseError, std::string("missing field '") + field + "'");
    }
  }
  raw.covariate_distribution =
      detail::read_numbers(doc.at("covariate_distribution"), "covariate_distribution");
  raw.experimental_marginals =
      detail::read_numbers(doc.at("experimental_marginals"), "experimental_marginals");
  if (doc.contains("joint") && !doc.at("joint").is_null()) {
    const auto& node = doc.at("joint");
    if (!node.is_object()) {
      throw Error(ErrorKind::ParseError, "field 'joint' must map treatments to covariate tables");
    }
    raw.joint.emplace();
    for (const auto& [treatment, row] : node.items()) {
      (*raw.joint)[treatment] = detail::read_numbers(row, "joint." + treatment);
    }
  }
  return raw;
}

/// Parses and validates scenario text. `source` prefixes every error message.
inline Scenario parse_scenario_text(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                source + ": " + detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) +
                    ": malformed JSON");
  }
  try {
    return validate_scenario(raw_scenario_from_json(doc));
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.detail());
  }
}

inline Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path.string());
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json doc;
  if (!s.name().empty()) doc["name"] = s.name();
  doc["treatments"] = s.treatments().labels();
  doc["covariates"] = s.covariate_space().labels();
  auto& pi = doc["covariate_distribution"] = nlohmann::ordered_json::object();
  for (std::size_t x = 0; x < s.covariates().size(); ++x) pi[s.covariate_space()[x]] = s.covariates()[x];
  auto& q = doc["experimental_marginals"] = nlohmann::ordered_json::object();
  for (std::size_t t = 0; t < s.marginals().size(); ++t) q[s.treatments()[t]] = s.marginals()[t];
  if (s.joint()) {
    auto& joint = doc["joint"] = nlohmann::ordered_json::object();
    for (std::size_t t = 0; t < s.treatments().size(); ++t) {
      auto& row = joint[s.treatments()[t]] = nlohmann::ordered_json::object();
      for (std::size_t x = 0; x < s.covariates().size(); ++x) {
        row[s.covariate_space()[x]] = s.joint()->success(t, x);
      }
    }
  }
  return doc;
}

/// Two-covariate, two-treatment scenario with labels a, b and 0, 1.
inline Scenario binary_scenario(double pa, double q0, double q1, std::string name = {}) {
  RawScenario raw;
  raw.name = std::move(name);
  raw.treatments = {"0", "1"};
  raw.covariates = {"a", "b"};
  raw.covariate_distribution = {{"a", pa}, {"b", 1.0 - pa}};
  raw.experimental_marginals = {{"0", q0}, {"1", q1}};
  return validate_scenario(raw);
}

/// Perry Preschool graduation rates: 0.49 without and 0.67 with preschool.
/// `intact_share` is P(x = a), the share of children from intact families.
inline Scenario perry_scenario(double intact_share, std::string name = {}) {
  return binary_scenario(intact_share, 0.49, 0.67, std::move(name));
}

/// The possible world in which tau(0,1) attains its upper bound at P(x = a) = 0.5.
inline JointResponseModel perry_witness_world() {
  CovariateDistribution pi(CovariateSpace({"a", "b"}), {0.5, 0.5});
  return JointResponseModel(pi, TreatmentSet({"0", "1"}), {{0.98, 0.0}, {0.34, 1.0}});
}

}  // namespace ambichoice
