#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wtpleak/model.hpp"

namespace wtpleak {

using ChatHistory = std::vector<std::pair<Role, std::string>>;

// A single chat-completion capability. Remote implementations call an HTTPS
// endpoint; scripted implementations are pure functions of
// (system_prompt, history, seed).
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string identity() const = 0;
  virtual std::string complete(const std::string& system_prompt,
                               const ChatHistory& history) = 0;
};

}  // namespace wtpleak
