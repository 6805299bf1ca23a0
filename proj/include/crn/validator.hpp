#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crn/model.hpp"

namespace crn {

enum class Severity { Error, Warning };

// Error codes block simulation; warning codes pass through to the user.
//   E01 duplicate name            W01 zero rate constant
//   E02 dangling species index    W02 fractional initial amount
//   E03 negative rate constant    W03 species in no reaction
//   E04 identical sides           W04 all-zero stoichiometry column
//   E05 no reactions
//   E06 coefficient below 1
//   E07 negative or non-finite initial amount
//   E08 non-finite rate constant
//   E09 invalid identifier
struct ValidationIssue {
  std::string code;
  Severity severity = Severity::Error;
  std::string subject;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool is_admissible = true;

  std::size_t count(std::string_view code) const;

  /// {"admissible": ..., "issues": [{"code","severity","subject","message"}...]}
  std::string to_json() const;
  std::string to_text() const;

  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate(const ReactionNetwork& network);

}  // namespace crn
