#include "crn/mock_llm.hpp"

#include <httplib.h>

namespace crn {
namespace {

nlohmann::json completion_envelope(const std::string& content) {
  return {{"id", "mock-completion"},
          {"object", "chat.completion"},
          {"choices",
           {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}, {"finish_reason", "stop"}}}}};
}

const MockRule* match(const std::vector<MockRule>& rules, int call, const std::string& body) {
  for (const auto& rule : rules) {
    if (rule.call && *rule.call != call) continue;
    if (rule.request_contains && body.find(*rule.request_contains) == std::string::npos) continue;
    return &rule;
  }
  return nullptr;
}

}  // namespace

std::vector<MockRule> load_mock_rules(const nlohmann::json& doc) {
  std::vector<MockRule> rules;
  for (const auto& item : doc.at("rules")) {
    MockRule rule;
    if (item.contains("call")) rule.call = item.at("call").get<int>();
    if (item.contains("request_contains")) rule.request_contains = item.at("request_contains").get<std::string>();
    if (item.contains("content_json")) {
      rule.content = item.at("content_json").dump(2);
    } else if (item.contains("content")) {
      rule.content = item.at("content").get<std::string>();
    }
    if (item.contains("status")) rule.status = item.at("status").get<int>();
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string MockChatTransport::complete(const nlohmann::json& body) {
  const int call = static_cast<int>(requests_.size());
  requests_.push_back(body);
  const MockRule* rule = match(rules_, call, body.dump());
  if (!rule) throw EndpointError(404, "mock: no rule matches call " + std::to_string(call));
  if (rule->status < 200 || rule->status >= 300)
    throw EndpointError(rule->status, "endpoint returned HTTP " + std::to_string(rule->status));
  return rule->content;
}

struct MockLlmServer::Impl {
  httplib::Server server;
  std::vector<MockRule> rules;
  mutable std::mutex mutex;
  std::vector<std::string> bodies;
  std::vector<std::string> auth;
};

MockLlmServer::MockLlmServer(std::vector<MockRule> rules) : impl_(std::make_unique<Impl>()) {
  impl_->rules = std::move(rules);
  Impl* impl = impl_.get();
  impl->server.Post(R"(.*/chat/completions)", [impl](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(impl->mutex);
    const int call = static_cast<int>(impl->bodies.size());
    impl->bodies.push_back(req.body);
    impl->auth.push_back(req.get_header_value("Authorization"));
    const MockRule* rule = match(impl->rules, call, req.body);
    if (!rule) {
      res.status = 404;
      res.set_content(R"({"error":{"message":"no mock rule matches"}})", "application/json");
      return;
    }
    res.status = rule->status;
    if (rule->status >= 200 && rule->status < 300) {
      res.set_content(completion_envelope(rule->content).dump(), "application/json");
    } else {
      res.set_content(R"({"error":{"message":"mock failure"}})", "application/json");
    }
  });
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw EndpointError(0, "mock server could not bind");
  thread_ = std::thread([impl] { impl->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

MockLlmServer::~MockLlmServer() { stop(); }

void MockLlmServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

void MockLlmServer::wait() {
  if (thread_.joinable()) thread_.join();
}

std::string MockLlmServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

std::vector<std::string> MockLlmServer::request_bodies() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->bodies;
}

std::vector<std::string> MockLlmServer::authorization_headers() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->auth;
}

}  // namespace crn
