#pragma once

#include <stdexcept>
#include <string>

namespace llmob {

// Every failure in the library carries one of these codes. The C API and the
// CLI map them onto exit statuses, so codes must stay distinguishable per
// failure family (config / io / backend / budget / data).
enum class ErrorCode {
  internal,
  config,
  io,
  parse,             // malformed input text (row, timestamp, number)
  data,              // violated data precondition (empty set, missing date)
  backend,           // backend unreachable after bounded retries
  replay_miss,       // replay backend has no cached response
  empty_completion,  // backend returned empty text
  budget,            // completion budget exhausted
  rating_missing,
  rating_not_integer,
  rating_out_of_range,
  plan_missing,      // no balanced {...} object in the response
  plan_entry_format, // plan entry without " at " separator
  plan_time,         // entry time not H:MM within one day
  plan_empty,
  numeric,           // non-finite intermediate value
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace llmob
