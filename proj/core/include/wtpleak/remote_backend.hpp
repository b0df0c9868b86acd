#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "wtpleak/backend.hpp"

namespace wtpleak {

// Chat-completion endpoint settings. The credential never lives in config
// files; api_key_env names the environment variable to read it from.
struct RemoteBackendSettings {
  std::string endpoint;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "WTPLEAK_API_KEY";
  int timeout_ms = 60000;
};

// OpenAI-style chat-completion client over cpp-httplib. Completions are
// requested at the provider's default sampling settings. One call per
// complete(); retries and backoff belong to the caller's RetryPolicy.
class RemoteBackend : public CompletionBackend {
 public:
  explicit RemoteBackend(RemoteBackendSettings settings);
  ~RemoteBackend() override;

  std::string identity() const override;
  std::string complete(const std::string& system_prompt, const ChatHistory& history) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wtpleak
