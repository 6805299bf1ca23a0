#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crn/model.hpp"

namespace crn {

/// mono_chain, enzyme, ding2024, oligomers, aggregation52, chain_enzyme.
const std::vector<std::string>& fixture_names();

/// $CRN_FIXTURE_DIR if set, otherwise the data/fixtures directory of the source tree.
std::filesystem::path fixture_dir();

/// Parses the DSL form. Throws UnknownFixtureError for names outside fixture_names().
ReactionNetwork load_fixture(std::string_view name);

/// Parses the kinetic-table JSON form of the same fixture.
ReactionNetwork load_fixture_table(std::string_view name);

/// Contents of a fixture file, e.g. fixture_file("mono_chain", ".matrix.csv").
std::string fixture_file(std::string_view name, std::string_view suffix);

}  // namespace crn
