#include <doctest.h>

#include "wtpleak/dialogue.hpp"
#include "wtpleak/errors.hpp"
#include "wtpleak/inference.hpp"
#include "wtpleak/prompts.hpp"
#include "wtpleak/redaction.hpp"
#include "wtpleak/scripted.hpp"

using namespace wtpleak;

namespace {

class FixedBackend : public CompletionBackend {
 public:
  explicit FixedBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string identity() const override { return "fixed"; }
  std::string complete(const std::string&, const ChatHistory&) override {
    if (calls_ >= replies_.size()) return replies_.back();
    return replies_[calls_++];
  }
  std::size_t calls() const { return calls_; }

 private:
  std::vector<std::string> replies_;
  std::size_t calls_ = 0;
};

Transcript small_transcript() {
  Transcript t;
  t.turns = {{Role::buyer, "What's the best value here?"},
             {Role::seller, "The mid model at $89.99."}};
  return t;
}

InferenceOptions fast_options() {
  InferenceOptions options;
  options.retry.sleep_ms = [](std::uint64_t) {};
  return options;
}

}  // namespace

TEST_CASE("parser extracts a record embedded in prose") {
  InferenceReport r = parse_inference_output(
      "Sure! Based on the dialogue I'd say:\n"
      "{\"estimate\": 150, \"confidence\": \"high\", \"key_signals\": [\"a\", \"b\", \"c\"]}\n"
      "Let me know if you need more.");
  CHECK(r.estimate == 150);
  CHECK(r.confidence == Confidence::high);
  CHECK(r.key_signals == std::array<std::string, 3>{"a", "b", "c"});
  CHECK_FALSE(r.signal_count_adjusted);
}

TEST_CASE("non-numeric estimates are a parse error") {
  CHECK_THROWS_AS(parse_inference_output(
                      R"({"estimate": "one hundred", "confidence": "low", "key_signals": []})"),
                  InferenceParseError);
}

TEST_CASE("parse errors carry the raw text") {
  const std::string raw = "no record here at all";
  try {
    parse_inference_output(raw);
    FAIL("expected a parse error");
  } catch (const InferenceParseError& e) {
    CHECK(e.raw() == raw);
  }
}

TEST_CASE("four signals are truncated to three with a warning flag") {
  InferenceReport r = parse_inference_output(
      R"({"estimate": 80, "confidence": "medium", "key_signals": ["1", "2", "3", "4"]})");
  CHECK(r.signal_count_adjusted);
  CHECK(r.key_signals == std::array<std::string, 3>{"1", "2", "3"});
}

TEST_CASE("fewer signals are padded with a warning flag") {
  InferenceReport r = parse_inference_output(
      R"({"estimate": 80, "confidence": "LOW", "key_signals": ["only one"]})");
  CHECK(r.signal_count_adjusted);
  CHECK(r.key_signals[0] == "only one");
  CHECK(r.key_signals[2].empty());
  CHECK(r.confidence == Confidence::low);
}

TEST_CASE("zero and negative estimates are rejected") {
  CHECK_THROWS_AS(parse_inference_output(
                      R"({"estimate": 0, "confidence": "low", "key_signals": ["a","b","c"]})"),
                  InferenceParseError);
  CHECK_THROWS_AS(parse_inference_output(
                      R"({"estimate": -5, "confidence": "low", "key_signals": ["a","b","c"]})"),
                  InferenceParseError);
}

TEST_CASE("first valid record wins over later ones and invalid earlier ones") {
  InferenceReport r = parse_inference_output(
      "{\"confidence\": \"high\"} then "
      "{\"estimate\": 120, \"confidence\": \"low\", \"key_signals\": [\"x\",\"y\",\"z\"]} and "
      "{\"estimate\": 999, \"confidence\": \"high\", \"key_signals\": [\"x\",\"y\",\"z\"]}");
  CHECK(r.estimate == 120);
}

TEST_CASE("braces inside strings do not derail the scanner") {
  InferenceReport r = parse_inference_output(
      R"({"estimate": 60, "confidence": "low", "key_signals": ["asks {cheap} tier", "b", "c"]})");
  CHECK(r.estimate == 60);
  CHECK(r.key_signals[0] == "asks {cheap} tier");
}

TEST_CASE("digit-string estimates are accepted") {
  InferenceReport r = parse_inference_output(
      R"({"estimate": "150", "confidence": "medium", "key_signals": ["a","b","c"]})");
  CHECK(r.estimate == 150);
}

TEST_CASE("infer_wtp passes a fixed valid record through") {
  FixedBackend backend(
      {R"({"estimate": 150, "confidence": "high", "key_signals": ["a","b","c"]})"});
  InferenceReport r =
      infer_wtp(small_transcript(), InferenceVariant::full, backend, fast_options());
  CHECK(r.estimate == 150);
  CHECK(r.variant == InferenceVariant::full);
  CHECK(r.retries_used == 0);
  CHECK_FALSE(r.above_sanity_ceiling);
}

TEST_CASE("malformed output twice then a valid record succeeds with retry count 2") {
  FixedBackend backend(
      {"garbage", "still garbage",
       R"({"estimate": 95, "confidence": "medium", "key_signals": ["a","b","c"]})"});
  InferenceReport r =
      infer_wtp(small_transcript(), InferenceVariant::full, backend, fast_options());
  CHECK(r.estimate == 95);
  CHECK(r.retries_used == 2);
}

TEST_CASE("persistently unparseable output raises after retries") {
  FixedBackend backend({"nope"});
  InferenceOptions options = fast_options();
  options.retry.max_retries = 2;
  CHECK_THROWS_AS(
      infer_wtp(small_transcript(), InferenceVariant::full, backend, options),
      InferenceParseError);
}

TEST_CASE("empty transcripts are a precondition error") {
  FixedBackend backend({"{}"});
  CHECK_THROWS_AS(infer_wtp(Transcript{}, InferenceVariant::full, backend, fast_options()),
                  ValidationError);
}

TEST_CASE("estimates above the ceiling are kept and flagged, never clipped") {
  FixedBackend backend(
      {R"({"estimate": 25000, "confidence": "low", "key_signals": ["a","b","c"]})"});
  InferenceReport r =
      infer_wtp(small_transcript(), InferenceVariant::full, backend, fast_options());
  CHECK(r.estimate == 25000);
  CHECK(r.above_sanity_ceiling);
}

TEST_CASE("the assembled inference input stays within prompt plus transcript") {
  // The backend sees exactly one user message: the rendered transcript; and
  // the system prompt: the constant inference prompt.
  class CapturingBackend : public CompletionBackend {
   public:
    std::string identity() const override { return "capture"; }
    std::string complete(const std::string& system_prompt,
                         const ChatHistory& history) override {
      seen_system = system_prompt;
      REQUIRE(history.size() == 1);
      seen_user = history[0].second;
      return R"({"estimate": 10, "confidence": "low", "key_signals": ["a","b","c"]})";
    }
    std::string seen_system, seen_user;
  };
  CapturingBackend backend;
  Transcript t = small_transcript();
  infer_wtp(t, InferenceVariant::full, backend, fast_options());
  CHECK(backend.seen_system == render_inference_prompt());
  CHECK(backend.seen_user == render_transcript(t));
}

TEST_CASE("dollar-redacted inference input carries zero currency patterns") {
  const auto& packs = builtin_packs();
  DialogueLimits limits;
  limits.retry.sleep_ms = [](std::uint64_t) {};
  for (const auto& cell : packs.verbal_cell_ids()) {
    Instruction ins = Instruction::verbal(packs.profile_by_id(cell));
    ScriptedBuyerBackend buyer(ins, 31);
    ScriptedSellerBackend seller(packs.catalog, 32);
    Transcript t = run_dialogue(ins, limits, buyer, seller, packs);
    auto [redacted, report] = redact_dollars(t);
    CHECK(scan_currency(render_transcript(redacted)).empty());
  }
}

TEST_CASE("oracle backend emits parseable records that decode the tier") {
  const auto& packs = builtin_packs();
  ScriptedOracleInferenceBackend backend(packs);
  DialogueLimits limits;
  limits.retry.sleep_ms = [](std::uint64_t) {};
  Instruction ins = Instruction::verbal(packs.profile_by_id("vp_500"));
  ScriptedBuyerBackend buyer(ins, 77);
  ScriptedSellerBackend seller(packs.catalog, 78);
  Transcript t = run_dialogue(ins, limits, buyer, seller, packs);

  InferenceReport r = infer_wtp(t, InferenceVariant::full, backend, fast_options());
  CHECK(r.estimate >= 399);
  CHECK(r.estimate <= 550);
}
