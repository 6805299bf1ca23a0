#include "crn/validator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <set>

#include <json.hpp>

#include "crn/numfmt.hpp"

namespace crn {
namespace {

class ReportBuilder {
 public:
  void error(const char* code, const std::string& subject, std::string message) {
    report_.issues.push_back({code, Severity::Error, subject, std::move(message)});
    report_.is_admissible = false;
  }
  void warning(const char* code, const std::string& subject, std::string message) {
    report_.issues.push_back({code, Severity::Warning, subject, std::move(message)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

// Net coefficient per species for one side, with duplicate terms summed.
std::map<std::size_t, long> side_totals(const std::vector<ReactionTerm>& terms) {
  std::map<std::size_t, long> totals;
  for (const auto& t : terms) totals[t.species] += t.coefficient;
  return totals;
}

}  // namespace

std::size_t ValidationReport::count(std::string_view code) const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [&](const ValidationIssue& i) { return i.code == code; }));
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["admissible"] = is_admissible;
  doc["issues"] = nlohmann::ordered_json::array();
  for (const auto& issue : issues) {
    nlohmann::ordered_json item;
    item["code"] = issue.code;
    item["severity"] = issue.severity == Severity::Error ? "error" : "warning";
    item["subject"] = issue.subject;
    item["message"] = issue.message;
    doc["issues"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& issue : issues) {
    out += issue.code + (issue.severity == Severity::Error ? " error   " : " warning ") + issue.subject + ": " +
           issue.message + "\n";
  }
  out += is_admissible ? "admissible\n" : "not admissible\n";
  return out;
}

ValidationReport validate(const ReactionNetwork& network) {
  static const std::regex identifier("[A-Za-z_][A-Za-z0-9_]*");
  ReportBuilder report;

  if (network.reactions.empty()) report.error("E05", "network", "network has no reactions");

  std::set<std::string> seen;
  for (const auto& s : network.species) {
    if (!seen.insert(s.name).second) report.error("E01", s.name, "species name is not unique");
    if (!std::regex_match(s.name, identifier)) report.error("E09", s.name, "species name is not a valid identifier");
    if (!std::isfinite(s.initial_amount) || s.initial_amount < 0.0) {
      report.error("E07", s.name, "initial amount must be finite and non-negative");
    } else if (s.initial_amount != std::floor(s.initial_amount)) {
      report.warning("W02", s.name,
                     "fractional initial amount " + format_double(s.initial_amount) +
                         " is floored for stochastic simulation");
    }
  }
  seen.clear();
  for (const auto& r : network.reactions) {
    if (!seen.insert(r.name).second) report.error("E01", r.name, "reaction name is not unique");
    if (!std::regex_match(r.name, identifier)) report.error("E09", r.name, "reaction name is not a valid identifier");
  }

  const std::size_t n_species = network.species.size();
  std::vector<bool> referenced(n_species, false);
  for (const auto& r : network.reactions) {
    bool dangling = false;
    for (const auto* side : {&r.reactants, &r.products}) {
      for (const auto& t : *side) {
        if (t.species >= n_species) {
          dangling = true;
        } else {
          referenced[t.species] = true;
        }
        if (t.coefficient < 1)
          report.error("E06", r.name, "stoichiometric coefficient " + std::to_string(t.coefficient) + " is below 1");
      }
    }
    if (dangling) report.error("E02", r.name, "reaction references a species index outside the species list");

    if (!std::isfinite(r.rate_constant)) {
      report.error("E08", r.name, "rate constant is not finite");
    } else if (r.rate_constant < 0.0) {
      report.error("E03", r.name, "rate constant " + format_double(r.rate_constant) + " is negative");
    } else if (r.rate_constant == 0.0) {
      report.warning("W01", r.name, "rate constant is 0; reaction is inactive");
    }

    const auto lhs = side_totals(r.reactants);
    const auto rhs = side_totals(r.products);
    if (lhs == rhs) {
      report.error("E04", r.name, "reactants and products are identical");
    } else if (!dangling) {
      // Only zero coefficients can make unequal sides cancel.
      bool all_zero = true;
      std::map<std::size_t, long> net = rhs;
      for (const auto& [idx, c] : lhs) net[idx] -= c;
      for (const auto& [idx, c] : net) all_zero = all_zero && c == 0;
      if (all_zero) report.warning("W04", r.name, "stoichiometry column is all zeros");
    }
  }

  for (std::size_t i = 0; i < n_species; ++i) {
    if (!referenced[i])
      report.warning("W03", network.species[i].name, "species is neither produced nor consumed by any reaction");
  }
  return report.take();
}

}  // namespace crn
