#include "wtpleak/retry.hpp"

#include <chrono>
#include <thread>

#include "wtpleak/errors.hpp"

namespace wtpleak {

std::uint64_t backoff_delay_ms(int attempt, std::uint64_t base_ms, std::uint64_t cap_ms) {
  if (attempt < 0) attempt = 0;
  if (attempt >= 63) return cap_ms;
  std::uint64_t factor = 1ULL << attempt;
  if (base_ms != 0 && factor > cap_ms / base_ms) return cap_ms;
  std::uint64_t delay = base_ms * factor;
  return delay > cap_ms ? cap_ms : delay;
}

std::string run_with_retries(const std::function<std::string()>& op,
                             const RetryPolicy& policy, int* retries_used) {
  auto sleep = policy.sleep_ms ? policy.sleep_ms : [](std::uint64_t ms) {
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
  };
  std::string last_error = "empty completion";
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
    if (attempt > 0)
      sleep(backoff_delay_ms(attempt - 1, policy.base_delay_ms, policy.cap_delay_ms));
    try {
      std::string result = op();
      if (result.find_first_not_of(" \t\r\n") == std::string::npos) {
        last_error = "empty completion";
        continue;
      }
      if (retries_used) *retries_used = attempt;
      return result;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw BackendError("backend failed after " + std::to_string(policy.max_retries) +
                     " retries: " + last_error);
}

}  // namespace wtpleak
