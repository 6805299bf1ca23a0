#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace crn {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-match parse of a decimal or scientific literal.
std::optional<double> parse_double(std::string_view text);

}  // namespace crn
