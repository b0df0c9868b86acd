#include "wtpleak/remote_backend.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "wtpleak/errors.hpp"

namespace wtpleak {

using nlohmann::json;

struct RemoteBackend::Impl {
  RemoteBackendSettings settings;
  std::string api_key;
};

RemoteBackend::RemoteBackend(RemoteBackendSettings settings)
    : impl_(std::make_unique<Impl>()) {
  if (settings.endpoint.empty())
    throw ValidationError("remote backend requires an endpoint URL");
  if (settings.model.empty()) throw ValidationError("remote backend requires a model name");
  impl_->settings = std::move(settings);
  if (const char* key = std::getenv(impl_->settings.api_key_env.c_str())) {
    impl_->api_key = key;
  }
}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::identity() const {
  return "remote:" + impl_->settings.model + "@" + impl_->settings.endpoint;
}

std::string RemoteBackend::complete(const std::string& system_prompt,
                                    const ChatHistory& history) {
  json body;
  body["model"] = impl_->settings.model;
  body["messages"] = json::array();
  body["messages"].push_back({{"role", "system"}, {"content", system_prompt}});
  // The party being completed speaks as "assistant"; counterpart turns arrive
  // as "user" messages. The last history entry is always the counterpart's,
  // hence the parity rule.
  for (std::size_t i = 0; i < history.size(); ++i) {
    const bool same_side = (history.size() - 1 - i) % 2 == 1;
    body["messages"].push_back(
        {{"role", same_side ? "assistant" : "user"}, {"content", history[i].second}});
  }
  if (history.empty()) {
    body["messages"].push_back({{"role", "user"}, {"content", "Begin."}});
  }

  httplib::Client client(impl_->settings.endpoint);
  client.set_connection_timeout(0, impl_->settings.timeout_ms * 1000LL);
  client.set_read_timeout(impl_->settings.timeout_ms / 1000,
                          (impl_->settings.timeout_ms % 1000) * 1000);
  httplib::Headers headers;
  if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);

  auto res = client.Post(impl_->settings.path, headers, body.dump(), "application/json");
  if (!res)
    throw BackendError("transport failure calling " + impl_->settings.endpoint + ": " +
                       httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500)
    throw BackendError("retryable HTTP " + std::to_string(res->status) + " from " +
                       impl_->settings.endpoint);
  if (res->status != 200)
    throw BackendError("HTTP " + std::to_string(res->status) + " from " +
                       impl_->settings.endpoint + ": " + res->body);

  json parsed = json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) throw BackendError("non-JSON completion response");
  try {
    return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed completion response: ") + e.what());
  }
}

}  // namespace wtpleak
