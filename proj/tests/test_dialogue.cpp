#include <doctest.h>

#include <functional>

#include "wtpleak/dialogue.hpp"
#include "wtpleak/errors.hpp"

using namespace wtpleak;

namespace {

// Minimal scriptable backend for driving the loop from tests.
class StubBackend : public CompletionBackend {
 public:
  explicit StubBackend(std::function<std::string(const ChatHistory&)> fn)
      : fn_(std::move(fn)) {}
  std::string identity() const override { return "stub"; }
  std::string complete(const std::string&, const ChatHistory& history) override {
    return fn_(history);
  }

 private:
  std::function<std::string(const ChatHistory&)> fn_;
};

int buyer_turns(const ChatHistory& history) {
  int n = 0;
  for (const auto& [role, text] : history)
    if (role == Role::buyer) ++n;
  return n;
}

Instruction verbal_instruction() {
  return Instruction::verbal(builtin_packs().profile_by_id("vp_100"));
}

DialogueLimits fast_limits() {
  DialogueLimits limits;
  limits.retry.sleep_ms = [](std::uint64_t) {};
  return limits;
}

}  // namespace

TEST_CASE("decision markers fire case-insensitively; questions do not") {
  CHECK(detect_purchase_decision("I'll take the SoundCore Pro X."));
  CHECK(detect_purchase_decision("i'll GO WITH the cheaper one"));
  CHECK(detect_purchase_decision("I'd like to buy the AudioTech."));
  CHECK(detect_purchase_decision("Let's do the premium model."));
  CHECK(detect_purchase_decision("DECISION: SonicElite ANC Max"));
  CHECK(detect_purchase_decision("Thanks!\n decision: the budget pair"));
  CHECK(detect_purchase_decision("I\xE2\x80\x99ll take the SoundCore Pro X."));  // curly quote

  CHECK_FALSE(detect_purchase_decision("Which one would you recommend?"));
  CHECK_FALSE(detect_purchase_decision(""));
  CHECK_FALSE(detect_purchase_decision("A tough decision: price or comfort?"));
  CHECK_FALSE(detect_purchase_decision("I'll think it over."));
}

TEST_CASE("buyer deciding on turn 2 ends the dialogue without the cap") {
  StubBackend buyer([](const ChatHistory& h) {
    return buyer_turns(h) == 0 ? "What do you have?" : "Sounds right. I'll take the SoundCore Pro X.";
  });
  StubBackend seller([](const ChatHistory&) { return "We stock five models."; });

  Transcript t = run_dialogue(verbal_instruction(), fast_limits(), buyer, seller);
  REQUIRE(t.turns.size() == 3);
  CHECK(t.turns[0].role == Role::buyer);
  CHECK(t.turns[1].role == Role::seller);
  CHECK(t.turns[2].role == Role::buyer);
  CHECK_FALSE(t.turn_limit_hit);
}

TEST_CASE("buyer that never decides hits the four-turn cap") {
  StubBackend buyer([](const ChatHistory&) { return "Tell me more about the options."; });
  StubBackend seller([](const ChatHistory&) { return "Of course, here are details."; });

  Transcript t = run_dialogue(verbal_instruction(), fast_limits(), buyer, seller);
  int buyers = 0;
  for (const auto& turn : t.turns)
    if (turn.role == Role::buyer) ++buyers;
  CHECK(buyers == 4);
  CHECK(t.turns.size() == 7);  // ends on the buyer's capped turn
  CHECK(t.turn_limit_hit);
}

TEST_CASE("zero max_buyer_turns is a validation error") {
  StubBackend any([](const ChatHistory&) { return "x"; });
  DialogueLimits limits = fast_limits();
  limits.max_buyer_turns = 0;
  CHECK_THROWS_AS(run_dialogue(verbal_instruction(), limits, any, any), ValidationError);
}

TEST_CASE("backend failure is retried, then the trial is lost") {
  int calls = 0;
  StubBackend flaky([&](const ChatHistory&) -> std::string {
    ++calls;
    throw BackendError("socket reset");
  });
  StubBackend seller([](const ChatHistory&) { return "hello"; });
  DialogueLimits limits = fast_limits();
  limits.max_retries = 2;
  CHECK_THROWS_AS(run_dialogue(verbal_instruction(), limits, flaky, seller), BackendError);
  CHECK(calls == 3);  // first attempt + 2 retries
}

TEST_CASE("empty completions are retried like failures") {
  int calls = 0;
  StubBackend sometimes_empty([&](const ChatHistory& h) -> std::string {
    ++calls;
    if (calls < 3) return "   \n";
    return buyer_turns(h) == 0 ? "First question?" : "I'll take the SoundCore Pro X.";
  });
  StubBackend seller([](const ChatHistory&) { return "hi"; });
  Transcript t = run_dialogue(verbal_instruction(), fast_limits(), sometimes_empty, seller);
  CHECK(t.turns.size() >= 1);
  CHECK(calls >= 3);
}

TEST_CASE("oversized completions are truncated and counted") {
  StubBackend chatty([](const ChatHistory& h) {
    if (buyer_turns(h) == 0) return std::string(9000, 'x');
    return std::string("I'll take the SoundCore Pro X.");
  });
  StubBackend seller([](const ChatHistory&) { return "ok"; });
  DialogueLimits limits = fast_limits();
  limits.completion_char_cap = 4000;
  Transcript t = run_dialogue(verbal_instruction(), limits, chatty, seller);
  CHECK(t.turns[0].text.size() == 4000);
  CHECK(t.truncated_turns == 1);
}

TEST_CASE("role alternation survives adversarial backends") {
  // Property-style sweep: buyers that decide at every possible turn index.
  for (int decide_at = 0; decide_at < 6; ++decide_at) {
    StubBackend buyer([&](const ChatHistory& h) {
      if (buyer_turns(h) == decide_at) return std::string("I'll take the AudioTech Studio 200.");
      return std::string("More details please.");
    });
    StubBackend seller([](const ChatHistory&) { return "Sure."; });
    Transcript t = run_dialogue(verbal_instruction(), fast_limits(), buyer, seller);
    CHECK_NOTHROW(validate_transcript(t, 4));
    CHECK(t.turns.front().role == Role::buyer);
    CHECK(t.turns.back().role == Role::buyer);
    CHECK(t.turn_limit_hit == (decide_at >= 4));
  }
}
