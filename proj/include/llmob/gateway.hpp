#pragma once

#include <atomic>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "llmob/prompts.hpp"
#include "llmob/types.hpp"

namespace llmob {

struct SamplingParams {
  double temperature = 1.0;
  int max_tokens = 512;

  friend bool operator==(const SamplingParams&, const SamplingParams&) = default;
};

struct LlmRequest {
  TemplateId template_id = TemplateId::daily_generation;
  std::string prompt;
  SamplingParams params;

  // Hex SHA-256 over (template name, parameters, prompt); stable across runs
  // and platforms, used as the cache key.
  std::string fingerprint() const;
};

struct LlmResponse {
  std::string text;
  std::string backend;
  bool cache_hit = false;
};

// Append-only JSONL response cache keyed by request fingerprint; on load the
// last entry wins for a duplicated fingerprint. With an empty path the cache
// is memory-only.
class CacheStore {
 public:
  explicit CacheStore(std::filesystem::path path = {});

  std::optional<std::string> lookup(const std::string& fingerprint) const;
  // Appends unless the fingerprint is already present with identical text.
  void put(const LlmRequest& request, const std::string& response);
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> entries_;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual std::string complete(const LlmRequest& request) = 0;
};

// Deterministic offline backend. Scripted responders are consulted first
// (latest wins), then the FIFO queue, then a built-in behavior that answers
// every template with text derived from the request fingerprint — ratings,
// plans over the locations listed in the prompt, one-sentence motivations.
// When the prompt carries the pandemic context sentence, generated plans
// shrink to half length.
class MockBackend : public Backend {
 public:
  using Responder = std::function<std::optional<std::string>(const LlmRequest&)>;

  std::string name() const override { return "mock"; }
  std::string complete(const LlmRequest& request) override;

  void script(Responder responder);
  void push_response(std::string text);  // consumed once, FIFO

 private:
  std::mutex mutex_;
  std::vector<Responder> responders_;
  std::deque<std::string> queue_;
};

// Built-in deterministic answer used by MockBackend; exposed for tests.
std::string default_mock_response(const LlmRequest& request);

// Answers only from the cache; a miss is an error naming the fingerprint.
class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(std::shared_ptr<CacheStore> cache) : cache_(std::move(cache)) {}
  std::string name() const override { return "replay"; }
  std::string complete(const LlmRequest& request) override;

 private:
  std::shared_ptr<CacheStore> cache_;
};

struct HttpBackendConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-3.5-turbo";
  std::string api_key;      // sent as "Authorization: Bearer ..." when nonempty
  int max_retries = 3;      // attempts = max_retries
  int retry_backoff_ms = 200;
  int timeout_sec = 60;
};

// POSTs an OpenAI-style chat-completion request and returns the assistant
// text. Network and protocol failures retry up to the configured bound.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}
  std::string name() const override { return "http"; }
  std::string complete(const LlmRequest& request) override;

 private:
  HttpBackendConfig config_;
};

struct GatewayStats {
  std::size_t completions = 0;  // backend invocations (cache misses)
  std::size_t cache_hits = 0;
};

// Front door for all completions: consults the cache, bounds in-flight
// backend calls, enforces the per-run completion budget, and records every
// successful response back into the cache.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<CacheStore> cache,
          int parallelism = 4, std::size_t max_completions = 5000);

  LlmResponse complete(const LlmRequest& request);

  GatewayStats stats() const;
  std::shared_ptr<CacheStore> cache() const { return cache_; }

 private:
  std::shared_ptr<Backend> backend_;
  std::shared_ptr<CacheStore> cache_;
  std::counting_semaphore<256> slots_;
  std::size_t max_completions_;
  mutable std::mutex stats_mutex_;
  GatewayStats stats_;
};

// --- response parsers (pure, thread-safe) ---

// Extracts the integer after the first "Rating:" token. Distinct errors for
// a missing token, a non-integer value, and a value outside [1, 10].
int parse_rating(const std::string& text);

struct ActivityPlan {
  std::vector<std::pair<std::string, int>> entries;  // (location name, minute)
  std::string reason;

  friend bool operator==(const ActivityPlan&, const ActivityPlan&) = default;
};

// Parses the {"plan": [...], "reason": ...} object out of a response. Each
// entry splits on its final " at " so location names may themselves contain
// " at ". Accepts both the bare plan syntax and JSON-quoted entries.
ActivityPlan parse_plan(const std::string& text);

// Canonical text form of a plan (the format the generation prompt requests).
std::string format_plan(const ActivityPlan& plan);

}  // namespace llmob
