#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crn/model.hpp"

namespace crn {

/// Non-fatal observation made while parsing, e.g. an implicitly declared species.
struct ParseNote {
  std::string where;
  std::string message;
};

/// Parses the line-oriented reaction DSL:
///
///     # comment
///     species A = 100
///     mono_chain_r1: A -> B ; k = 1.0
///     dimerize: 2 M1 -> M2 ; k = 3.8e-3
///     source: 0 -> M0 ; k = 0
///
/// Repeated addends are merged (`M1 + M1` is `2 M1`). Species referenced by a
/// reaction before any declaration are appended with amount 0 and a note.
/// Throws SyntaxError, DuplicateNameError or NegativeRateError.
ReactionNetwork parse_dsl(std::string_view text, std::vector<ParseNote>* notes = nullptr);

/// Canonical DSL text: all species declarations, then all reactions.
std::string emit_dsl(const ReactionNetwork& network);

/// Parses a kinetic-table JSON document (see docs/kinetic_table.schema.json).
/// Throws SchemaError (with a JSON pointer), DuplicateNameError or NegativeRateError.
ReactionNetwork parse_kinetic_table(std::string_view json, std::vector<ParseNote>* notes = nullptr);

std::string emit_kinetic_table(const ReactionNetwork& network);

}  // namespace crn
