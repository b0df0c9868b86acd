#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wtpleak/model.hpp"
#include "wtpleak/packs.hpp"

namespace wtpleak {

class CompletionBackend;

inline constexpr const char* kPriceRedactedToken = "[PRICE REDACTED]";
inline constexpr const char* kBudgetPhraseRedactedToken = "[BUDGET PHRASE REDACTED]";
inline constexpr const char* kPersonaRedactedToken = "[PERSONA REDACTED]";

struct RedactionViolation {
  int turn_index = 0;
  std::string matched_span;
  bool operator==(const RedactionViolation&) const = default;
};

struct RedactionReport {
  InferenceVariant variant = InferenceVariant::dollar_redacted;
  int replacements = 0;
  std::vector<RedactionViolation> residual_violations;
};

// Byte span [begin, end) within one string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Currency amounts: symbol form ("$49.99", "$1,299.00", "$5") and the spelled
// numeric form ("50 dollars"). Unmarked numbers ("around 200") are not treated
// as currency.
std::vector<Span> scan_currency(const std::string& text);

// Case-insensitive phrase occurrences at word boundaries, leftmost-longest.
std::vector<Span> scan_phrases(const std::string& text, const std::vector<std::string>& phrases);

// True when text contains any of the phrases at a word boundary.
bool contains_phrase(const std::string& text, const std::vector<std::string>& phrases);

// Replaces every currency amount with [PRICE REDACTED] and every canonical
// budget phrase with [BUDGET PHRASE REDACTED]. Idempotent; all other bytes,
// turn count, and role order are preserved.
std::pair<Transcript, RedactionReport> redact_dollars(const Transcript& t);
std::pair<Transcript, RedactionReport> redact_dollars(const Transcript& t,
                                                      const RedactionLists& lists);

// Agent-backed persona redaction: each turn is rewritten by the backend under
// the five-category identity-cue instruction, then verified by the stop-list
// scan; on verification failure the turn gets one re-pass before the report
// flags what remains.
std::pair<Transcript, RedactionReport> redact_persona(const Transcript& t,
                                                      CompletionBackend& backend);
std::pair<Transcript, RedactionReport> redact_persona(const Transcript& t,
                                                      CompletionBackend& backend,
                                                      const PackSet& packs);

// Residual scan. Dollar variant: currency patterns and budget phrases.
// Persona variant: financial-register stop words (price-token family and
// number-qualified "dollars" exempted), valuation phrases, and profile-pack
// occupation/lifestyle terms; spans inside catalog product names or currency
// tokens are never flagged, since the persona variant must preserve those.
RedactionReport verify_redaction(const Transcript& t, InferenceVariant variant);
RedactionReport verify_redaction(const Transcript& t, InferenceVariant variant,
                                 const PackSet& packs);

// The matches verify_redaction(persona) would flag in one string.
std::vector<Span> scan_persona(const std::string& text, const PackSet& packs);

}  // namespace wtpleak
