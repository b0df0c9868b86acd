#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "wtpleak/errors.hpp"
#include "wtpleak/remote_backend.hpp"
#include "wtpleak/retry.hpp"

using namespace wtpleak;
using nlohmann::json;

TEST_CASE("backoff delays double per attempt and respect the cap") {
  CHECK(backoff_delay_ms(0, 500, 8000) == 500);
  CHECK(backoff_delay_ms(1, 500, 8000) == 1000);
  CHECK(backoff_delay_ms(2, 500, 8000) == 2000);
  CHECK(backoff_delay_ms(3, 500, 8000) == 4000);
  CHECK(backoff_delay_ms(4, 500, 8000) == 8000);
  CHECK(backoff_delay_ms(10, 500, 8000) == 8000);
  CHECK(backoff_delay_ms(80, 500, 8000) == 8000);  // shift overflow guard
}

TEST_CASE("run_with_retries retries failures and empty completions, then succeeds") {
  int calls = 0;
  std::vector<std::uint64_t> slept;
  RetryPolicy policy;
  policy.max_retries = 3;
  policy.base_delay_ms = 100;
  policy.sleep_ms = [&](std::uint64_t ms) { slept.push_back(ms); };

  int retries_used = -1;
  std::string result = run_with_retries(
      [&]() -> std::string {
        ++calls;
        if (calls == 1) throw BackendError("boom");
        if (calls == 2) return "   ";
        return "ok";
      },
      policy, &retries_used);
  CHECK(result == "ok");
  CHECK(calls == 3);
  CHECK(retries_used == 2);
  CHECK(slept == std::vector<std::uint64_t>{100, 200});
}

TEST_CASE("run_with_retries gives up after max_retries with the last error") {
  RetryPolicy policy;
  policy.max_retries = 2;
  policy.sleep_ms = [](std::uint64_t) {};
  int calls = 0;
  CHECK_THROWS_WITH_AS(run_with_retries(
                           [&]() -> std::string {
                             ++calls;
                             throw BackendError("rate limited");
                           },
                           policy),
                       "backend failed after 2 retries: rate limited", BackendError);
  CHECK(calls == 3);
}

namespace {

struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> fn) {
    server.Post("/v1/chat/completions", std::move(fn));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    thread.join();
  }
};

}  // namespace

TEST_CASE("remote backend sends system + mapped history and reads the completion") {
  json seen;
  LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    json reply = {{"choices", {{{"message", {{"content", "a completion"}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });

  RemoteBackendSettings settings;
  settings.endpoint = "http://127.0.0.1:" + std::to_string(server.port);
  settings.model = "test-model";
  RemoteBackend backend(settings);

  ChatHistory history{{Role::buyer, "opening"}, {Role::seller, "reply"}};
  std::string out = backend.complete("sys prompt", history);
  CHECK(out == "a completion");
  REQUIRE(seen["messages"].size() == 3);
  CHECK(seen["model"] == "test-model");
  CHECK(seen["messages"][0]["role"] == "system");
  CHECK(seen["messages"][1]["role"] == "assistant");  // own earlier turn
  CHECK(seen["messages"][2]["role"] == "user");       // counterpart's last turn
}

TEST_CASE("429 responses raise and succeed after the retry loop") {
  std::atomic<int> calls{0};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    if (calls.fetch_add(1) < 2) {
      res.status = 429;
      res.set_content("slow down", "text/plain");
      return;
    }
    json reply = {{"choices", {{{"message", {{"content", "finally"}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });

  RemoteBackendSettings settings;
  settings.endpoint = "http://127.0.0.1:" + std::to_string(server.port);
  settings.model = "m";
  RemoteBackend backend(settings);

  RetryPolicy policy;
  policy.max_retries = 3;
  policy.sleep_ms = [](std::uint64_t) {};
  std::string out =
      run_with_retries([&] { return backend.complete("sys", {{Role::buyer, "hi"}}); }, policy);
  CHECK(out == "finally");
  CHECK(calls.load() == 3);
}

TEST_CASE("credentials come from the configured environment variable only") {
  std::string auth_header;
  LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
    auth_header = req.get_header_value("Authorization");
    json reply = {{"choices", {{{"message", {{"content", "ok"}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });

  setenv("WTPLEAK_TEST_KEY", "sk-secret", 1);
  RemoteBackendSettings settings;
  settings.endpoint = "http://127.0.0.1:" + std::to_string(server.port);
  settings.model = "m";
  settings.api_key_env = "WTPLEAK_TEST_KEY";
  RemoteBackend backend(settings);
  backend.complete("sys", {{Role::buyer, "hi"}});
  CHECK(auth_header == "Bearer sk-secret");
  unsetenv("WTPLEAK_TEST_KEY");
}

TEST_CASE("remote backend validates its settings") {
  RemoteBackendSettings no_endpoint;
  no_endpoint.model = "m";
  CHECK_THROWS_AS(RemoteBackend{no_endpoint}, ValidationError);
  RemoteBackendSettings no_model;
  no_model.endpoint = "http://localhost:1";
  CHECK_THROWS_AS(RemoteBackend{no_model}, ValidationError);
}
