#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace wtpleak {

// Exponential backoff delay for a zero-based attempt index: base * 2^attempt,
// capped. Attempt 0 is the delay before the first retry.
std::uint64_t backoff_delay_ms(int attempt, std::uint64_t base_ms, std::uint64_t cap_ms);

struct RetryPolicy {
  int max_retries = 3;
  std::uint64_t base_delay_ms = 500;
  std::uint64_t cap_delay_ms = 8000;
  // Injected so tests never sleep for real. Defaults to std::this_thread::sleep_for.
  std::function<void(std::uint64_t)> sleep_ms;
};

// Runs op() until it returns a non-empty string, retrying on exceptions and on
// empty completions up to policy.max_retries additional attempts. Rethrows a
// BackendError after the final failure. retries_used reports how many retries
// were consumed on success.
std::string run_with_retries(const std::function<std::string()>& op,
                             const RetryPolicy& policy, int* retries_used = nullptr);

}  // namespace wtpleak
