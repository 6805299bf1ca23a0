#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crn/errors.hpp"
#include "crn/model.hpp"
#include "crn/validator.hpp"

namespace crn {

inline constexpr std::string_view kPromptVersion = "v1";

struct LlmConfig {
  std::string base_url;
  std::string model;
  /// Sent as a bearer token; never written to transcripts or metadata.
  std::string api_key;
  double temperature = 0.0;
  int max_repair_rounds = 3;
  double timeout_seconds = 120.0;

  /// Reads CRN_LLM_BASE_URL, CRN_LLM_MODEL and CRN_LLM_API_KEY.
  static LlmConfig from_env();
};

class EndpointError : public Error {
 public:
  EndpointError(int status, const std::string& message) : Error(message), status_(status) {}
  /// HTTP status, or 0 for transport failures.
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// One request/response exchange with the endpoint.
struct ExtractionRound {
  nlohmann::json prompt;  // the messages array sent
  std::string raw_response;
  std::string parse_outcome;  // "ok" or a description of the failure
  std::optional<ValidationReport> validation;
};

struct ExtractionTranscript {
  std::vector<ExtractionRound> rounds;
  std::optional<std::string> final_table;  // kinetic-table JSON on success
  std::string failure;

  std::string to_json() const;
};

class ExtractionFailedError : public Error {
 public:
  ExtractionFailedError(const std::string& message, ExtractionTranscript transcript)
      : Error(message), transcript_(std::move(transcript)) {}
  const ExtractionTranscript& transcript() const noexcept { return transcript_; }

 private:
  ExtractionTranscript transcript_;
};

/// Rounds ran out and the last reply was not JSON even after fence stripping.
class ResponseNotJsonError : public ExtractionFailedError {
 public:
  using ExtractionFailedError::ExtractionFailedError;
};

/// Sends one chat-completions request body and returns the assistant message content.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const nlohmann::json& body) = 0;
};

/// OpenAI-compatible `POST {base_url}/chat/completions` over HTTP(S).
class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(const LlmConfig& config);
  std::string complete(const nlohmann::json& body) override;

 private:
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // base path + /chat/completions
  std::string api_key_;
  double timeout_seconds_;
};

struct Extraction {
  ReactionNetwork network;
  std::string kinetic_table;
  ExtractionTranscript transcript;
};

/// System prompt with the kinetic-table schema filled in.
std::string extraction_system_prompt();
/// Repair instruction with a JSON issue list filled in.
std::string repair_prompt(const std::string& issues_json);

/// Removes one surrounding Markdown code fence, if present.
std::string strip_code_fence(std::string_view text);

/// Asks the model for a kinetic table, then schema-parses and validates it.
/// Any failure (not JSON, schema error, Error-severity issue) is fed back in
/// a repair round, up to `max_repair_rounds` times.
/// Throws EndpointError, ExtractionFailedError or ResponseNotJsonError.
Extraction extract_network(std::string_view description, const LlmConfig& config, ChatTransport& transport);

}  // namespace crn
