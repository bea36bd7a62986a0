#include "llmob/gateway.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace llmob {

using nlohmann::json;

std::string LlmRequest::fingerprint() const {
  char params_buf[64];
  std::snprintf(params_buf, sizeof(params_buf), "%.6g\x1f%d", params.temperature,
                params.max_tokens);
  std::string canonical = std::string(template_name(template_id)) + "\x1f" + params_buf +
                          "\x1f" + prompt;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

CacheStore::CacheStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  if (!in) raise(ErrorCode::io, "cannot open cache file " + path_.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("fingerprint") || !j.contains("response")) {
      raise(ErrorCode::parse, "cache " + path_.string() + " line " +
                                  std::to_string(line_no) + ": malformed entry");
    }
    // Last entry wins.
    entries_[j["fingerprint"].get<std::string>()] = j["response"].get<std::string>();
  }
}

std::optional<std::string> CacheStore::lookup(const std::string& fingerprint) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(fingerprint);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CacheStore::put(const LlmRequest& request, const std::string& response) {
  std::lock_guard lock(mutex_);
  const std::string fp = request.fingerprint();
  auto it = entries_.find(fp);
  if (it != entries_.end() && it->second == response) return;
  entries_[fp] = response;
  if (path_.empty()) return;
  json entry = {
      {"fingerprint", fp},
      {"request",
       {{"template_id", template_name(request.template_id)},
        {"prompt", request.prompt},
        {"temperature", request.params.temperature},
        {"max_tokens", request.params.max_tokens}}},
      {"response", response},
      {"timestamp",
       std::chrono::duration_cast<std::chrono::seconds>(
           std::chrono::system_clock::now().time_since_epoch())
           .count()},
  };
  std::ofstream out(path_, std::ios::app);
  if (!out) raise(ErrorCode::io, "cannot append to cache file " + path_.string());
  out << entry.dump() << "\n";
}

std::size_t CacheStore::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

// --- mock backend ---

namespace {

std::uint64_t fp_to_u64(const std::string& fingerprint) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 16 && i < fingerprint.size(); ++i) {
    char c = fingerprint[i];
    v = (v << 4) | std::uint64_t(c <= '9' ? c - '0' : c - 'a' + 10);
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(", ", start);
    if (comma == std::string::npos) {
      auto item = text.substr(start);
      if (!item.empty()) out.push_back(item);
      break;
    }
    out.push_back(text.substr(start, comma - start));
    start = comma + 2;
  }
  return out;
}

}  // namespace

std::string default_mock_response(const LlmRequest& request) {
  const std::string fp = request.fingerprint();
  const std::uint64_t h = fp_to_u64(fp);
  const std::string tag = fp.substr(0, 8);
  switch (request.template_id) {
    case TemplateId::pattern_evaluation:
      return "Rating: " + std::to_string(1 + h % 10) +
             "\nReason: judged against my usual routine (" + tag + ").";
    case TemplateId::pattern_generation:
      return "I keep a steady routine around the neighborhood, visiting familiar "
             "places at regular hours and returning home in the evening (" +
             tag + ").";
    case TemplateId::evolving_motivation:
    case TemplateId::learning_motivation:
      return "Today I am motivated to cover my usual errands and meals close to "
             "home while keeping time for small personal interests (" +
             tag + ").";
    case TemplateId::daily_generation: {
      // Plan over the candidate locations named in the prompt itself.
      const std::string marker = "locations you are likely to visit: ";
      auto pos = request.prompt.find(marker);
      std::vector<std::string> candidates;
      if (pos != std::string::npos) {
        auto end = request.prompt.find('\n', pos);
        candidates = split_list(request.prompt.substr(
            pos + marker.size(),
            (end == std::string::npos ? request.prompt.size() : end) - pos -
                marker.size()));
      }
      if (candidates.empty()) candidates = {"Town Hall", "Rest Area"};
      const bool pandemic =
          request.prompt.find("Now it is the pandemic period") != std::string::npos;
      std::size_t n = std::min<std::size_t>(candidates.size(), 6);
      if (pandemic) n = std::max<std::size_t>(1, n / 2);
      int minute = 8 * 60 + int(h % 6) * 10;
      ActivityPlan plan;
      for (std::size_t i = 0; i < n; ++i) {
        plan.entries.emplace_back(candidates[i % candidates.size()], minute);
        minute += 60 + int((h >> (4 * i)) % 4) * 10;
      }
      plan.reason = pandemic ? "Staying close to home and keeping the day short."
                             : "A usual day over my frequent places.";
      return format_plan(plan);
    }
    case TemplateId::context_injection:
      break;
  }
  return "OK (" + tag + ")";
}

std::string MockBackend::complete(const LlmRequest& request) {
  std::lock_guard lock(mutex_);
  if (!queue_.empty()) {
    std::string text = std::move(queue_.front());
    queue_.pop_front();
    return text;
  }
  for (auto it = responders_.rbegin(); it != responders_.rend(); ++it) {
    if (auto r = (*it)(request)) return *r;
  }
  return default_mock_response(request);
}

void MockBackend::script(Responder responder) {
  std::lock_guard lock(mutex_);
  responders_.push_back(std::move(responder));
}

void MockBackend::push_response(std::string text) {
  std::lock_guard lock(mutex_);
  queue_.push_back(std::move(text));
}

std::string ReplayBackend::complete(const LlmRequest& request) {
  if (auto hit = cache_->lookup(request.fingerprint())) return *hit;
  raise(ErrorCode::replay_miss,
        "replay cache miss for fingerprint " + request.fingerprint());
}

// --- gateway ---

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<CacheStore> cache,
                 int parallelism, std::size_t max_completions)
    : backend_(std::move(backend)),
      cache_(std::move(cache)),
      slots_(std::max(1, std::min(parallelism, 256))),
      max_completions_(max_completions) {
  if (!backend_) raise(ErrorCode::config, "no backend configured");
}

LlmResponse Gateway::complete(const LlmRequest& request) {
  const std::string fp = request.fingerprint();
  if (cache_) {
    if (auto hit = cache_->lookup(fp)) {
      std::lock_guard lock(stats_mutex_);
      ++stats_.cache_hits;
      return {*hit, backend_->name(), true};
    }
  }
  {
    std::lock_guard lock(stats_mutex_);
    if (stats_.completions >= max_completions_) {
      raise(ErrorCode::budget, "completion budget exhausted (" +
                                   std::to_string(max_completions_) + " calls)");
    }
    ++stats_.completions;
  }
  slots_.acquire();
  std::string text;
  try {
    text = backend_->complete(request);
  } catch (...) {
    slots_.release();
    throw;
  }
  slots_.release();
  if (text.empty()) {
    raise(ErrorCode::empty_completion,
          "backend " + backend_->name() + " returned an empty completion");
  }
  if (cache_) cache_->put(request, text);
  return {text, backend_->name(), false};
}

GatewayStats Gateway::stats() const {
  std::lock_guard lock(stats_mutex_);
  return stats_;
}

// --- parsers ---

int parse_rating(const std::string& text) {
  const std::string token = "Rating:";
  auto pos = text.find(token);
  if (pos == std::string::npos) {
    raise(ErrorCode::rating_missing, "no \"Rating:\" token in response");
  }
  std::size_t i = pos + token.size();
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  std::size_t start = i;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t digits = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == digits) {
    raise(ErrorCode::rating_not_integer, "\"Rating:\" not followed by an integer");
  }
  if (i + 1 < text.size() && text[i] == '.' &&
      std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
    raise(ErrorCode::rating_not_integer, "rating is not an integer: \"" +
                                             text.substr(start, i + 2 - start) + "...\"");
  }
  const long value = std::stol(text.substr(start, i - start));
  if (value < 1 || value > 10) {
    raise(ErrorCode::rating_out_of_range,
          "rating " + std::to_string(value) + " outside [1, 10]");
  }
  return int(value);
}

namespace {

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::pair<std::string, int> parse_plan_entry(const std::string& raw) {
  const std::string entry = unquote(strip(raw));
  auto pos = entry.rfind(" at ");
  if (pos == std::string::npos || pos == 0) {
    raise(ErrorCode::plan_entry_format,
          "plan entry without \" at \" separator: \"" + entry + "\"");
  }
  const std::string name = strip(entry.substr(0, pos));
  const int minute = parse_hmm(strip(entry.substr(pos + 4)));
  return {name, minute};
}

}  // namespace

ActivityPlan parse_plan(const std::string& text) {
  auto open = text.find('{');
  if (open == std::string::npos) {
    raise(ErrorCode::plan_missing, "no {...} object in response");
  }
  int depth = 0;
  std::size_t close = std::string::npos;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (text[i] == '{') ++depth;
    if (text[i] == '}' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string::npos) {
    raise(ErrorCode::plan_missing, "unbalanced {...} object in response");
  }
  const std::string object = text.substr(open, close - open + 1);

  ActivityPlan plan;

  // Try strict JSON first (quoted entries); fall back to the bare syntax.
  json j = json::parse(object, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("plan") && j["plan"].is_array()) {
    for (const auto& item : j["plan"]) {
      if (!item.is_string()) {
        raise(ErrorCode::plan_entry_format, "plan entry is not text");
      }
      plan.entries.push_back(parse_plan_entry(item.get<std::string>()));
    }
    if (j.contains("reason") && j["reason"].is_string()) {
      plan.reason = j["reason"].get<std::string>();
    }
  } else {
    auto plan_key = object.find("\"plan\"");
    if (plan_key == std::string::npos) plan_key = object.find("plan");
    auto bracket = object.find('[', plan_key == std::string::npos ? 0 : plan_key);
    auto bracket_end = object.find(']', bracket);
    if (plan_key == std::string::npos || bracket == std::string::npos ||
        bracket_end == std::string::npos) {
      raise(ErrorCode::plan_missing, "no plan list in response object");
    }
    const std::string list = object.substr(bracket + 1, bracket_end - bracket - 1);
    std::size_t start = 0;
    while (start < list.size()) {
      auto comma = list.find(',', start);
      const std::string item =
          list.substr(start, (comma == std::string::npos ? list.size() : comma) - start);
      if (!strip(item).empty()) plan.entries.push_back(parse_plan_entry(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    auto reason_key = object.find("\"reason\"", bracket_end);
    if (reason_key == std::string::npos) reason_key = object.find("reason", bracket_end);
    if (reason_key != std::string::npos) {
      auto colon = object.find(':', reason_key);
      if (colon != std::string::npos) {
        std::string reason = object.substr(colon + 1, close - open - colon - 1);
        plan.reason = unquote(strip(reason));
      }
    }
  }

  if (plan.entries.empty()) {
    raise(ErrorCode::plan_empty, "plan has no entries");
  }
  return plan;
}

std::string format_plan(const ActivityPlan& plan) {
  std::string out = "{\"plan\": [";
  bool first = true;
  for (const auto& [name, minute] : plan.entries) {
    if (!first) out += ", ";
    first = false;
    out += name + " at " + minute_to_hmm(minute);
  }
  out += "],\n\"reason\": \"" + plan.reason + "\"}";
  return out;
}

}  // namespace llmob
