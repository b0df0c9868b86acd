#include <doctest.h>

#include <regex>

#include "fixtures.hpp"
#include "wtpleak/errors.hpp"
#include "wtpleak/redaction.hpp"
#include "wtpleak/scripted.hpp"

using namespace wtpleak;

namespace {

// Independent reference scanner (regex route) used to cross-check the
// hand-rolled one over the whole corpus.
int reference_currency_count(const std::string& text) {
  static const std::regex pattern(
      R"(\$\d{1,3}(,\d{3})*(\.\d+)?|\$\d+(\.\d+)?|(^|[^A-Za-z0-9$.,])\d{1,3}(,\d{3})*(\.\d+)?[ \t]+[Dd]ollars?\b)");
  auto begin = std::sregex_iterator(text.begin(), text.end(), pattern);
  return static_cast<int>(std::distance(begin, std::sregex_iterator()));
}

Transcript one_turn(const std::string& text) {
  Transcript t;
  t.turns = {{Role::buyer, text}};
  return t;
}

}  // namespace

TEST_CASE("dollar redaction replaces symbol amounts") {
  auto [redacted, report] = redact_dollars(one_turn("priced at $49.99 today"));
  CHECK(redacted.turns[0].text == "priced at [PRICE REDACTED] today");
  CHECK(report.replacements == 1);
}

TEST_CASE("dollar redaction handles separators and the spelled form") {
  auto [redacted, report] = redact_dollars(one_turn("$1,299.00 or 50 dollars"));
  CHECK(redacted.turns[0].text == "[PRICE REDACTED] or [PRICE REDACTED]");
  CHECK(report.replacements == 2);
}

TEST_CASE("unmarked numbers stay; currency-marked ones go") {
  auto [redacted, report] =
      redact_dollars(one_turn("Somewhere around 200 would be fine, say 150 dollars."));
  CHECK(redacted.turns[0].text == "Somewhere around 200 would be fine, say [PRICE REDACTED].");
  CHECK(report.replacements == 1);
}

TEST_CASE("budget phrases get their own token") {
  auto [redacted, report] =
      redact_dollars(one_turn("My budget is $200, and I can afford more."));
  CHECK(redacted.turns[0].text.find("[BUDGET PHRASE REDACTED]") != std::string::npos);
  CHECK(redacted.turns[0].text.find("[PRICE REDACTED]") != std::string::npos);
  CHECK(redacted.turns[0].text.find("$200") == std::string::npos);
  CHECK(report.replacements >= 2);
}

TEST_CASE("transcripts without amounts pass through byte-identical") {
  Transcript plain = one_turn("No amounts here, just features and comfort talk.");
  auto [redacted, report] = redact_dollars(plain);
  CHECK(redacted.turns == plain.turns);
  CHECK(report.replacements == 0);
}

TEST_CASE("dollar redaction is idempotent over the whole corpus") {
  for (const auto& t : fixtures::fixture_corpus()) {
    auto [once, first] = redact_dollars(t);
    auto [twice, second] = redact_dollars(once);
    CHECK(second.replacements == 0);
    CHECK(twice.turns == once.turns);
  }
}

TEST_CASE("dollar redaction preserves turn count, roles, and unmatched bytes") {
  for (const auto& t : fixtures::fixture_corpus()) {
    auto [redacted, report] = redact_dollars(t);
    REQUIRE(redacted.turns.size() == t.turns.size());
    for (std::size_t i = 0; i < t.turns.size(); ++i)
      CHECK(redacted.turns[i].role == t.turns[i].role);
    if (report.replacements == 0) CHECK(redacted.turns == t.turns);
  }
}

TEST_CASE("verify(redact_dollars(t)) is clean for every corpus transcript") {
  for (const auto& t : fixtures::fixture_corpus()) {
    auto [redacted, report] = redact_dollars(t);
    auto verification = verify_redaction(redacted, InferenceVariant::dollar_redacted);
    CHECK(verification.residual_violations.empty());
  }
}

TEST_CASE("hand-rolled currency scanner agrees with the regex reference") {
  for (const auto& t : fixtures::fixture_corpus()) {
    for (const auto& turn : t.turns) {
      CAPTURE(turn.text);
      CHECK(static_cast<int>(scan_currency(turn.text).size()) ==
            reference_currency_count(turn.text));
    }
  }
}

TEST_CASE("verify_redaction reports residual dollars with their turn index") {
  Transcript t;
  t.turns = {{Role::buyer, "clean turn"}, {Role::seller, "that one is $5 even"}};
  auto report = verify_redaction(t, InferenceVariant::dollar_redacted);
  REQUIRE(report.residual_violations.size() == 1);
  CHECK(report.residual_violations[0].turn_index == 1);
  CHECK(report.residual_violations[0].matched_span == "$5");
}

TEST_CASE("persona scan flags occupations but not product names or prices") {
  const auto& packs = builtin_packs();
  CHECK(scan_persona("the Zenith Audiophile Edition at $399.99", packs).empty());
  CHECK(scan_persona("I'm a consultant with a dedicated listening room", packs).size() >= 2);
  CHECK(scan_persona("50 dollars is the sticker", packs).empty());
  CHECK_FALSE(scan_persona("every dollar matters to me", packs).empty());
}

TEST_CASE("persona redaction strips the grad-student clause but keeps product intent") {
  ScriptedPersonaRedactorBackend redactor(builtin_packs());
  Transcript t = one_turn(
      "I'm a grad student looking for headphones for studying in the library");
  auto [redacted, report] = redact_persona(t, redactor);
  const std::string& text = redacted.turns[0].text;
  CHECK(text.find("grad student") == std::string::npos);
  CHECK(text.find("library") == std::string::npos);
  CHECK(text.find("headphones") != std::string::npos);
  CHECK(text.find("[PERSONA REDACTED]") != std::string::npos);
  CHECK(report.residual_violations.empty());
}

TEST_CASE("persona placeholder lands mid-sentence for the commuter opening") {
  const auto& packs = builtin_packs();
  ScriptedPersonaRedactorBackend redactor(packs);
  Instruction ins = Instruction::verbal(packs.profile_by_id("vp_100"));
  Transcript t = one_turn(scripted_role_coherent_buyer(ins, {}, 7));
  auto [redacted, report] = redact_persona(t, redactor);
  const std::string& text = redacted.turns[0].text;
  const std::size_t pos = text.find("[PERSONA REDACTED]");
  REQUIRE(pos != std::string::npos);
  CHECK(pos > 0);
  CHECK(pos + std::string("[PERSONA REDACTED]").size() < text.size());
}

TEST_CASE("persona-free transcripts come back unchanged") {
  ScriptedPersonaRedactorBackend redactor(builtin_packs());
  Transcript t = one_turn("Which of the two has the longer battery life?");
  auto [redacted, report] = redact_persona(t, redactor);
  CHECK(redacted.turns == t.turns);
  CHECK(report.replacements == 0);
}

TEST_CASE("persona redaction covers seller turns that echo the buyer's persona") {
  ScriptedPersonaRedactorBackend redactor(builtin_packs());
  Transcript t = fixtures::grad_student_dialogue();
  auto [redacted, report] = redact_persona(t, redactor);
  for (const auto& turn : redacted.turns) {
    CAPTURE(turn.text);
    CHECK(turn.text.find("studying") == std::string::npos);
  }
}

TEST_CASE("persona redaction preserves every product name and price token") {
  const auto& packs = builtin_packs();
  ScriptedPersonaRedactorBackend redactor(packs);
  for (const auto& t : fixtures::fixture_corpus()) {
    auto [redacted, report] = redact_persona(t, redactor);
    REQUIRE(redacted.turns.size() == t.turns.size());
    for (std::size_t i = 0; i < t.turns.size(); ++i) {
      for (const auto& product : packs.catalog) {
        std::size_t before = 0, after = 0;
        for (std::size_t p = t.turns[i].text.find(product.name()); p != std::string::npos;
             p = t.turns[i].text.find(product.name(), p + 1))
          ++before;
        for (std::size_t p = redacted.turns[i].text.find(product.name());
             p != std::string::npos; p = redacted.turns[i].text.find(product.name(), p + 1))
          ++after;
        CHECK(before == after);
      }
      CHECK(scan_currency(redacted.turns[i].text).size() ==
            scan_currency(t.turns[i].text).size());
    }
  }
}

TEST_CASE("persona verifier flags a leftover occupation") {
  Transcript t = one_turn("As a consultant I compare options carefully.");
  auto report = verify_redaction(t, InferenceVariant::persona_redacted);
  REQUIRE_FALSE(report.residual_violations.empty());
  CHECK(report.residual_violations[0].matched_span == "consultant");
}

TEST_CASE("reference persona-free openings scan clean") {
  for (const auto& opening : fixtures::persona_free_openings()) {
    Transcript t = one_turn(opening);
    CAPTURE(opening);
    CHECK(verify_redaction(t, InferenceVariant::persona_redacted)
              .residual_violations.empty());
  }
}

TEST_CASE("verify_redaction rejects the full variant") {
  CHECK_THROWS_AS(verify_redaction(Transcript{}, InferenceVariant::full), ValidationError);
}
