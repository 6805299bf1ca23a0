#include <gtest/gtest.h>

#include <json.hpp>

#include "crn/errors.hpp"
#include "crn/fixtures.hpp"
#include "crn/io.hpp"
#include "crn/numfmt.hpp"
#include "crn/validator.hpp"

using namespace crn;

namespace {

nlohmann::ordered_json provenance() {
  return nlohmann::ordered_json::parse(read_text_file(fixture_dir() / "provenance.json"));
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST(Fixtures, EnzymeSpecies) {
  const auto net = load_fixture("enzyme");
  ASSERT_EQ(net.species.size(), 4u);
  EXPECT_EQ(net.species[0], (Species{"E", 100}));
  EXPECT_EQ(net.species[1], (Species{"S", 100}));
  EXPECT_EQ(net.species[2], (Species{"ES", 0}));
  EXPECT_EQ(net.species[3], (Species{"P", 0}));
  EXPECT_EQ(net.reactions[0].rate_constant, 0.001);
  EXPECT_EQ(net.reactions[1].rate_constant, 0.005);
  EXPECT_EQ(net.reactions[2].rate_constant, 0.01);
}

TEST(Fixtures, Counts) {
  EXPECT_EQ(load_fixture("mono_chain").reactions.size(), 3u);
  EXPECT_EQ(load_fixture("ding2024").reactions.size(), 12u);
  EXPECT_EQ(load_fixture("oligomers").reactions.size(), 12u);
  const auto agg = load_fixture("aggregation52");
  EXPECT_EQ(agg.species.size(), 8u);
  EXPECT_EQ(agg.reactions.size(), 52u);
  EXPECT_FALSE(agg.find_reaction("k47").has_value());
  EXPECT_FALSE(agg.find_reaction("k49").has_value());
  EXPECT_EQ(agg.species[0].initial_amount, 10000.0);
}

TEST(Fixtures, Constants) {
  const auto olig = load_fixture("oligomers");
  EXPECT_EQ(olig.reactions[*olig.find_reaction("misfolding")].rate_constant, 0.01);
  EXPECT_EQ(olig.reactions[*olig.find_reaction("aggregation_4")].rate_constant, 0.002);
  EXPECT_EQ(olig.reactions[*olig.find_reaction("dissociation_6")].rate_constant, 0.1);
  const auto ding = load_fixture("ding2024");
  EXPECT_EQ(ding.reactions[*ding.find_reaction("dissociation_o")].rate_constant, 0.36);
  const auto agg = load_fixture("aggregation52");
  EXPECT_EQ(agg.reactions[*agg.find_reaction("k0")].rate_constant, 1e-5);
  EXPECT_EQ(agg.reactions[*agg.find_reaction("k53")].rate_constant, 7e-7);
}

TEST(Fixtures, AllAdmissible) {
  for (const auto& name : fixture_names()) EXPECT_TRUE(validate(load_fixture(name)).is_admissible) << name;
}

TEST(Fixtures, DslAndJsonFormsAgree) {
  for (const auto& name : fixture_names()) EXPECT_EQ(load_fixture(name), load_fixture_table(name)) << name;
}

TEST(Fixtures, UnknownName) {
  EXPECT_THROW(load_fixture("figure3"), UnknownFixtureError);
  EXPECT_THROW(fixture_file("../CMakeLists", ".txt"), UnknownFixtureError);
}

TEST(Fixtures, ConstantsByteMatchProvenance) {
  const auto doc = provenance();
  ASSERT_EQ(doc.size(), fixture_names().size());
  for (const auto& name : fixture_names()) {
    SCOPED_TRACE(name);
    const auto& entry = doc.at(name);
    EXPECT_FALSE(entry.at("source").get<std::string>().empty());
    const std::string dsl = fixture_file(name, ".crn");
    const auto net = load_fixture(name);
    const auto& amounts = entry.at("initial_amounts");
    ASSERT_EQ(amounts.size(), net.species.size());
    for (const auto& s : net.species) {
      const std::string text = amounts.at(s.name);
      EXPECT_TRUE(has_line(dsl, "species " + s.name + " = " + text)) << s.name;
      EXPECT_EQ(parse_double(text), s.initial_amount);
    }
    const auto& rates = entry.at("rate_constants");
    ASSERT_EQ(rates.size(), net.reactions.size());
    for (const auto& r : net.reactions) {
      const std::string text = rates.at(r.name).at("value");
      EXPECT_NE(dsl.find(r.name + ": "), std::string::npos);
      const auto line_start = dsl.find("\n" + r.name + ": ") + 1;
      const auto line = dsl.substr(line_start, dsl.find('\n', line_start) - line_start);
      EXPECT_TRUE(line.ends_with(" ; k = " + text)) << line;
      EXPECT_EQ(parse_double(text), r.rate_constant) << r.name;
    }
  }
}

TEST(Fixtures, Ding2024InertMetadata) {
  const auto meta = provenance().at("ding2024").at("metadata");
  EXPECT_EQ(meta.at("gamma"), "4000");
  EXPECT_EQ(meta.at("O_alpha"), "6");
  EXPECT_EQ(meta.at("P_alpha"), "10");
  EXPECT_EQ(meta.at("delta"), "0");
  EXPECT_EQ(provenance().at("aggregation52").at("absent_rate_indices"), nlohmann::json({"k47", "k49"}));
}

TEST(Fixtures, MatrixFilesMatchBuiltMatrices) {
  for (const char* name : {"mono_chain", "enzyme", "chain_enzyme"})
    EXPECT_EQ(build_stoichiometry(load_fixture(name)).to_csv(), fixture_file(name, ".matrix.csv")) << name;
}
