#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "crn/llm.hpp"

namespace crn {

/// A canned reply, served when every set matcher holds.
///
/// Fixture file format:
///
///     {"rules": [
///       {"call": 0, "request_contains": "transforms", "content": "..."},
///       {"call": 1, "content_json": {...}},
///       {"status": 503}
///     ]}
///
/// `call` matches the 0-based request counter; `request_contains` is a
/// substring of the raw request body; `content_json` is serialized as the
/// reply content. Rules are tried in order.
struct MockRule {
  std::optional<int> call;
  std::optional<std::string> request_contains;
  std::string content;
  int status = 200;
};

std::vector<MockRule> load_mock_rules(const nlohmann::json& doc);

/// In-process transport driven by mock rules, for tests that skip HTTP.
class MockChatTransport : public ChatTransport {
 public:
  explicit MockChatTransport(std::vector<MockRule> rules) : rules_(std::move(rules)) {}
  std::string complete(const nlohmann::json& body) override;

  const std::vector<nlohmann::json>& requests() const { return requests_; }

 private:
  std::vector<MockRule> rules_;
  std::vector<nlohmann::json> requests_;
};

/// OpenAI-compatible chat-completions server on 127.0.0.1 with an ephemeral port.
class MockLlmServer {
 public:
  explicit MockLlmServer(std::vector<MockRule> rules);
  ~MockLlmServer();
  MockLlmServer(const MockLlmServer&) = delete;
  MockLlmServer& operator=(const MockLlmServer&) = delete;

  /// e.g. http://127.0.0.1:40123/v1
  std::string base_url() const;
  int port() const { return port_; }

  std::vector<std::string> request_bodies() const;
  std::vector<std::string> authorization_headers() const;

  /// Blocks serving requests until stop() (for a standalone mock process).
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace crn
