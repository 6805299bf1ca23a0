#include "crn/fixtures.hpp"

#include <algorithm>
#include <cstdlib>

#include "crn/dsl.hpp"
#include "crn/errors.hpp"
#include "crn/io.hpp"

#ifndef CRN_DATA_DIR
#define CRN_DATA_DIR "data"
#endif

namespace crn {

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"mono_chain", "enzyme",        "ding2024",
                                                 "oligomers",  "aggregation52", "chain_enzyme"};
  return names;
}

std::filesystem::path fixture_dir() {
  if (const char* dir = std::getenv("CRN_FIXTURE_DIR"); dir && *dir) return dir;
  return std::filesystem::path(CRN_DATA_DIR) / "fixtures";
}

std::string fixture_file(std::string_view name, std::string_view suffix) {
  const auto& names = fixture_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw UnknownFixtureError(std::string(name));
  return read_text_file(fixture_dir() / (std::string(name) + std::string(suffix)));
}

ReactionNetwork load_fixture(std::string_view name) { return parse_dsl(fixture_file(name, ".crn")); }

ReactionNetwork load_fixture_table(std::string_view name) {
  return parse_kinetic_table(fixture_file(name, ".json"));
}

}  // namespace crn
