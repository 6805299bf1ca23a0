#include <gtest/gtest.h>

#include <json.hpp>

#include "crn/dsl.hpp"
#include "crn/fixtures.hpp"
#include "crn/io.hpp"
#include "crn/llm.hpp"
#include "crn/mock_llm.hpp"
#include "crn/pipeline.hpp"
#include "support.hpp"

using namespace crn;

namespace {

const char* kProse =
    "Three first-order steps in a row. A converts to B (k1 = 1.0), B converts to C_mono (k2 = 0.1) and "
    "C_mono converts to D (k3 = 0.05). At the start there are 100 molecules of A and none of the others.";

// Round-1 reply that names a species it never declares.
const char* kDanglingTable = R"({"species":[{"name":"A","initial_amount":100},{"name":"B","initial_amount":0}],
  "reactions":[{"name":"r1","reactants":[{"species":"A","coefficient":1}],
                "products":[{"species":"Q","coefficient":1}],"rate_constant":1.0}]})";

MockRule reply(std::string content, std::optional<int> call = std::nullopt) {
  MockRule rule;
  rule.call = call;
  rule.content = std::move(content);
  return rule;
}

LlmConfig test_config(int repairs = 3) {
  LlmConfig c;
  c.base_url = "http://127.0.0.1:9/v1";
  c.model = "test-model";
  c.api_key = "sk-test-SECRET-4f9a";
  c.max_repair_rounds = repairs;
  return c;
}

}  // namespace

TEST(StripCodeFence, Variants) {
  EXPECT_EQ(strip_code_fence("```json\n{\"a\":1}\n```"), "{\"a\":1}");
  EXPECT_EQ(strip_code_fence("  ```\n{}\n```  \n"), "{}");
  EXPECT_EQ(strip_code_fence("{\"a\":1}"), "{\"a\":1}");
  EXPECT_EQ(strip_code_fence("Here you go: {}"), "Here you go: {}");
}

TEST(Prompts, SchemaAndIssuesAreInjected) {
  const std::string system = extraction_system_prompt();
  EXPECT_NE(system.find("\"rate_constant\""), std::string::npos);
  EXPECT_EQ(system.find("{{SCHEMA}}"), std::string::npos);
  const std::string repair = repair_prompt(R"({"issues":[{"code":"E04"}]})");
  EXPECT_NE(repair.find("\"E04\""), std::string::npos);
  EXPECT_EQ(repair.find("{{ISSUES}}"), std::string::npos);
}

TEST(Extraction, FixtureReplyGivesFixtureNetwork) {
  MockChatTransport transport({reply(fixture_file("mono_chain", ".json"))});
  const auto result = extract_network(kProse, test_config(), transport);
  EXPECT_EQ(result.network, load_fixture("mono_chain"));
  ASSERT_EQ(result.transcript.rounds.size(), 1u);
  EXPECT_EQ(result.transcript.rounds[0].parse_outcome, "ok");
  ASSERT_EQ(transport.requests().size(), 1u);
  const auto& body = transport.requests()[0];
  EXPECT_EQ(body.at("model"), "test-model");
  EXPECT_EQ(body.at("temperature"), 0.0);
  ASSERT_EQ(body.at("messages").size(), 2u);
  EXPECT_EQ(body.at("messages")[0].at("role"), "system");
  EXPECT_EQ(body.at("messages")[0].at("content"), extraction_system_prompt());
  EXPECT_EQ(body.at("messages")[1].at("content"), kProse);
}

TEST(Extraction, TwoRoundRepairSucceeds) {
  MockChatTransport transport({reply(kDanglingTable, 0), reply(fixture_file("mono_chain", ".json"), 1)});
  const auto result = extract_network(kProse, test_config(), transport);
  EXPECT_EQ(result.network, load_fixture("mono_chain"));
  ASSERT_EQ(result.transcript.rounds.size(), 2u);
  EXPECT_NE(result.transcript.rounds[0].parse_outcome, "ok");
  EXPECT_EQ(result.transcript.rounds[1].parse_outcome, "ok");
  const auto& second = transport.requests().at(1).at("messages");
  ASSERT_EQ(second.size(), 4u);
  EXPECT_EQ(second[2].at("role"), "assistant");
  EXPECT_EQ(second[2].at("content"), kDanglingTable);
  const std::string repair = second[3].at("content");
  EXPECT_NE(repair.find("/reactions/0/products/0/species"), std::string::npos);
  EXPECT_NE(repair.find("S01"), std::string::npos);
}

TEST(Extraction, ZeroRepairRoundsFailsAfterOneRound) {
  MockChatTransport transport({reply(kDanglingTable)});
  try {
    extract_network(kProse, test_config(0), transport);
    FAIL() << "expected ExtractionFailedError";
  } catch (const ResponseNotJsonError&) {
    FAIL() << "reply was JSON";
  } catch (const ExtractionFailedError& e) {
    EXPECT_EQ(e.transcript().rounds.size(), 1u);
    EXPECT_FALSE(e.transcript().final_table.has_value());
    EXPECT_FALSE(e.transcript().failure.empty());
  }
  EXPECT_EQ(transport.requests().size(), 1u);
}

TEST(Extraction, RoundsAreBounded) {
  MockChatTransport transport({reply(kDanglingTable)});
  try {
    extract_network(kProse, test_config(2), transport);
    FAIL();
  } catch (const ExtractionFailedError& e) {
    EXPECT_EQ(e.transcript().rounds.size(), 3u);
  }
  EXPECT_EQ(transport.requests().size(), 3u);
}

TEST(Extraction, InadmissibleNetworkIsRepaired) {
  const char* noop = R"({"species":[{"name":"A","initial_amount":1}],
    "reactions":[{"name":"r","reactants":[{"species":"A","coefficient":1}],
                  "products":[{"species":"A","coefficient":1}],"rate_constant":1}]})";
  MockChatTransport transport({reply(noop, 0), reply(fixture_file("enzyme", ".json"), 1)});
  const auto result = extract_network("enzyme", test_config(), transport);
  EXPECT_EQ(result.network, load_fixture("enzyme"));
  ASSERT_TRUE(result.transcript.rounds[0].validation.has_value());
  EXPECT_EQ(result.transcript.rounds[0].validation->count("E04"), 1u);
  const std::string repair = transport.requests().at(1).at("messages")[3].at("content");
  EXPECT_NE(repair.find("\"E04\""), std::string::npos);
}

TEST(Extraction, FencedJsonAcceptedButProseIsNot) {
  MockChatTransport fenced({reply("```json\n" + fixture_file("enzyme", ".json") + "```")});
  EXPECT_EQ(extract_network("enzyme", test_config(0), fenced).network, load_fixture("enzyme"));

  MockChatTransport chatty({reply("Sure! " + fixture_file("enzyme", ".json"))});
  EXPECT_THROW(extract_network("enzyme", test_config(1), chatty), ResponseNotJsonError);

  MockChatTransport recovers({reply("Sure! here it is", 0), reply(fixture_file("enzyme", ".json"), 1)});
  const auto result = extract_network("enzyme", test_config(1), recovers);
  EXPECT_EQ(result.transcript.rounds.size(), 2u);
}

TEST(Extraction, RejectsBadInputs) {
  MockChatTransport transport({reply("{}")});
  EXPECT_THROW(extract_network("   ", test_config(), transport), Error);
  EXPECT_THROW(extract_network("x", test_config(-1), transport), Error);
  EXPECT_TRUE(transport.requests().empty());
}

TEST(HttpTransport, TalksToMockServerWithBearerToken) {
  MockLlmServer server({reply(kDanglingTable, 0), reply(fixture_file("mono_chain", ".json"), 1)});
  LlmConfig config = test_config();
  config.base_url = server.base_url();
  config.timeout_seconds = 10;
  HttpChatTransport transport(config);
  const auto result = extract_network(kProse, config, transport);
  EXPECT_EQ(result.network, load_fixture("mono_chain"));
  const auto auth = server.authorization_headers();
  ASSERT_EQ(auth.size(), 2u);
  EXPECT_EQ(auth[0], "Bearer sk-test-SECRET-4f9a");
  const auto bodies = server.request_bodies();
  EXPECT_EQ(nlohmann::json::parse(bodies[0]).at("model"), "test-model");
  EXPECT_EQ(result.transcript.to_json().find("SECRET"), std::string::npos);
}

TEST(HttpTransport, HttpErrorCarriesStatus) {
  MockRule failing;
  failing.status = 503;
  MockLlmServer server({failing});
  LlmConfig config = test_config();
  config.base_url = server.base_url();
  config.timeout_seconds = 10;
  HttpChatTransport transport(config);
  try {
    extract_network(kProse, config, transport);
    FAIL();
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.status(), 503);
    EXPECT_EQ(std::string(e.what()).find("SECRET"), std::string::npos);
  }
}

TEST(HttpTransport, UnreachableEndpoint) {
  int port = 0;
  {
    MockLlmServer probe({});
    port = probe.port();
  }
  LlmConfig config = test_config();
  config.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  config.timeout_seconds = 2;
  HttpChatTransport transport(config);
  try {
    extract_network(kProse, config, transport);
    FAIL();
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.status(), 0);
  }
  config.base_url = "not a url";
  EXPECT_THROW(HttpChatTransport{config}, EndpointError);
}

TEST(MockRules, LoadFromJson) {
  const auto rules = load_mock_rules(nlohmann::json::parse(R"({"rules":[
    {"call":0,"request_contains":"abc","content":"x"},
    {"content_json":{"species":[],"reactions":[]}},
    {"status":500}]})"));
  ASSERT_EQ(rules.size(), 3u);
  EXPECT_EQ(rules[0].call, 0);
  EXPECT_EQ(rules[0].request_contains, "abc");
  EXPECT_EQ(nlohmann::json::parse(rules[1].content).at("species").size(), 0u);
  EXPECT_EQ(rules[2].status, 500);
}

TEST(PipelineEquivalence, MockExtractionMatchesDirectTable) {
  const std::string table = fixture_file("mono_chain", ".json");
  PipelineOptions options;
  options.ensemble.n_runs = 20;
  options.ensemble.base_seed = 31;
  options.out_dir = test::temp_dir("via_mock");
  MockChatTransport transport({reply(table)});
  const auto via_llm = run_pipeline(kProse, test_config(), transport, options);
  const auto via_llm_dir = options.out_dir;
  options.out_dir = test::temp_dir("direct");
  const auto direct = run_pipeline_from_table(table, options);

  EXPECT_EQ(via_llm.matrix, direct.matrix);
  EXPECT_TRUE(via_llm.ensemble.same_results(direct.ensemble));
  for (const char* file : {"kinetic_table.json", "matrix.csv", "ensemble.csv", "ensemble_meta.json", "model.xml"})
    EXPECT_EQ(read_text_file(via_llm_dir / file), read_text_file(options.out_dir / file)) << file;
  EXPECT_TRUE(std::filesystem::exists(via_llm_dir / "transcript.json"));
  EXPECT_FALSE(std::filesystem::exists(options.out_dir / "transcript.json"));
  const auto manifest = read_text_file(via_llm_dir / "manifest.json");
  EXPECT_EQ(manifest.find("SECRET"), std::string::npos);
  std::filesystem::remove_all(via_llm_dir);
  std::filesystem::remove_all(options.out_dir);
}
