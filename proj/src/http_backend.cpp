#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "llmob/gateway.hpp"

namespace llmob {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/...
};

SplitUrl split_url(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    raise(ErrorCode::config, "endpoint is not a URL: \"" + endpoint + "\"");
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {endpoint, "/v1/chat/completions"};
  }
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

}  // namespace

std::string HttpBackend::complete(const LlmRequest& request) {
  const auto url = split_url(config_.endpoint);
  const json body = {
      {"model", config_.model},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.params.temperature},
      {"max_tokens", request.params.max_tokens},
  };
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  std::string last_failure;
  for (int attempt = 1; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.retry_backoff_ms * (attempt - 1)));
    }
    httplib::Client client(url.base);
    client.set_connection_timeout(config_.timeout_sec);
    client.set_read_timeout(config_.timeout_sec);
    auto res = client.Post(url.path, headers, body.dump(), "application/json");
    if (!res) {
      last_failure = "connection failed (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status != 200) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
      last_failure = "malformed completion body";
      continue;
    }
    const auto& first = reply["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content")) {
      last_failure = "completion without message content";
      continue;
    }
    return first["message"]["content"].get<std::string>();
  }
  raise(ErrorCode::backend, "backend " + url.base + " unreachable after " +
                                std::to_string(config_.max_retries) + " attempts: " +
                                last_failure);
}

}  // namespace llmob
