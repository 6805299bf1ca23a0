#include <httplib.h>

#include "crn/llm.hpp"

#include <cstdlib>
#include <regex>

#include "crn/dsl.hpp"
#include "crn_prompts.hpp"

namespace crn {
namespace {

std::string replace_all(std::string text, std::string_view placeholder, std::string_view value) {
  for (std::size_t pos = 0; (pos = text.find(placeholder, pos)) != std::string::npos; pos += value.size())
    text.replace(pos, placeholder.size(), value);
  return text;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

nlohmann::json issue_json(const std::string& code, const std::string& subject, const std::string& message) {
  return {{"code", code}, {"severity", "error"}, {"subject", subject}, {"message", message}};
}

}  // namespace

LlmConfig LlmConfig::from_env() {
  LlmConfig config;
  config.base_url = env_or_empty("CRN_LLM_BASE_URL");
  config.model = env_or_empty("CRN_LLM_MODEL");
  config.api_key = env_or_empty("CRN_LLM_API_KEY");
  return config;
}

std::string ExtractionTranscript::to_json() const {
  nlohmann::ordered_json doc;
  doc["prompt_version"] = std::string(kPromptVersion);
  doc["rounds"] = nlohmann::ordered_json::array();
  for (const auto& round : rounds) {
    nlohmann::ordered_json item;
    item["prompt"] = round.prompt;
    item["raw_response"] = round.raw_response;
    item["parse_outcome"] = round.parse_outcome;
    item["validation_report"] =
        round.validation ? nlohmann::ordered_json::parse(round.validation->to_json()) : nlohmann::ordered_json();
    doc["rounds"].push_back(std::move(item));
  }
  if (final_table) {
    doc["final"] = nlohmann::ordered_json::parse(*final_table);
  } else {
    doc["final"] = nullptr;
    doc["failure"] = failure;
  }
  return doc.dump(2) + "\n";
}

HttpChatTransport::HttpChatTransport(const LlmConfig& config)
    : api_key_(config.api_key), timeout_seconds_(config.timeout_seconds) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config.base_url, m, url))
    throw EndpointError(0, "invalid endpoint base URL '" + config.base_url + "'");
  origin_ = m[1].str();
  std::string base_path = m[2].matched ? m[2].str() : "";
  while (!base_path.empty() && base_path.back() == '/') base_path.pop_back();
  path_ = base_path + "/chat/completions";
}

std::string HttpChatTransport::complete(const nlohmann::json& body) {
  httplib::Client client(origin_);
  const auto seconds = static_cast<time_t>(timeout_seconds_);
  const auto micros = static_cast<time_t>((timeout_seconds_ - static_cast<double>(seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw EndpointError(0, "request to " + origin_ + path_ + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw EndpointError(res->status, "endpoint returned HTTP " + std::to_string(res->status));

  try {
    const auto envelope = nlohmann::json::parse(res->body);
    return envelope.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(res->status, std::string("malformed chat completion response: ") + e.what());
  }
}

std::string extraction_system_prompt() {
  return replace_all(prompts::kExtractSystem, "{{SCHEMA}}", trim(prompts::kKineticTableSchema));
}

std::string repair_prompt(const std::string& issues_json) {
  return replace_all(prompts::kRepair, "{{ISSUES}}", trim(issues_json));
}

std::string strip_code_fence(std::string_view text) {
  std::string body = trim(text);
  if (body.rfind("```", 0) != 0) return body;
  const auto newline = body.find('\n');
  if (newline == std::string::npos) return body;
  body.erase(0, newline + 1);
  body = trim(body);
  if (body.size() >= 3 && body.compare(body.size() - 3, 3, "```") == 0) body.erase(body.size() - 3);
  return trim(body);
}

Extraction extract_network(std::string_view description, const LlmConfig& config, ChatTransport& transport) {
  if (trim(description).empty()) throw Error("description is empty");
  if (config.max_repair_rounds < 0) throw Error("max_repair_rounds must be non-negative");
  if (config.temperature < 0.0) throw Error("temperature must be non-negative");

  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", extraction_system_prompt()}});
  messages.push_back({{"role", "user"}, {"content", std::string(description)}});

  ExtractionTranscript transcript;
  bool last_not_json = false;
  const int max_rounds = 1 + config.max_repair_rounds;
  for (int round = 0; round < max_rounds; ++round) {
    nlohmann::json body = {{"model", config.model}, {"messages", messages}, {"temperature", config.temperature}};
    ExtractionRound record;
    record.prompt = messages;
    record.raw_response = transport.complete(body);

    const std::string candidate = strip_code_fence(record.raw_response);
    nlohmann::json issues = nlohmann::json::array();
    last_not_json = false;
    if (!nlohmann::json::accept(candidate)) {
      last_not_json = true;
      record.parse_outcome = "response is not JSON";
      issues.push_back(issue_json("P01", "response", "reply is not a single JSON object"));
    } else {
      try {
        ReactionNetwork network = parse_kinetic_table(candidate);
        ValidationReport report = validate(network);
        record.parse_outcome = "ok";
        record.validation = report;
        if (report.is_admissible) {
          Extraction out;
          out.kinetic_table = emit_kinetic_table(network);
          out.network = std::move(network);
          transcript.rounds.push_back(std::move(record));
          transcript.final_table = out.kinetic_table;
          out.transcript = std::move(transcript);
          return out;
        }
        issues = nlohmann::json::parse(report.to_json())["issues"];
      } catch (const SchemaError& e) {
        record.parse_outcome = std::string("schema error: ") + e.what();
        issues.push_back(issue_json("S01", e.pointer().empty() ? "/" : e.pointer(), e.reason()));
      } catch (const DuplicateNameError& e) {
        record.parse_outcome = e.what();
        issues.push_back(issue_json("E01", e.name(), e.what()));
      } catch (const NegativeRateError& e) {
        record.parse_outcome = e.what();
        issues.push_back(issue_json("E03", e.reaction(), e.what()));
      }
    }
    transcript.rounds.push_back(std::move(record));

    if (round + 1 < max_rounds) {
      messages.push_back({{"role", "assistant"}, {"content", transcript.rounds.back().raw_response}});
      messages.push_back({{"role", "user"}, {"content", repair_prompt(nlohmann::json({{"issues", issues}}).dump(2))}});
    }
  }

  const std::string message =
      "no admissible kinetic table after " + std::to_string(transcript.rounds.size()) + " round(s)";
  transcript.failure = message;
  if (last_not_json) throw ResponseNotJsonError(message, std::move(transcript));
  throw ExtractionFailedError(message, std::move(transcript));
}

}  // namespace crn
