#include "wtpleak/redaction.hpp"

#include <algorithm>
#include <cctype>

#include "wtpleak/backend.hpp"
#include "wtpleak/errors.hpp"
#include "wtpleak/prompts.hpp"

namespace wtpleak {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string to_lower(const std::string& s) {
  std::string out(s.size(), '\0');
  std::transform(s.begin(), s.end(), out.begin(), lower);
  return out;
}

// Consumes "digits [,ddd]* [.digits]" starting at pos. Returns one past the
// number, or pos when there is no digit.
std::size_t consume_number(const std::string& text, std::size_t pos) {
  std::size_t i = pos;
  while (i < text.size() && is_digit(text[i])) ++i;
  if (i == pos) return pos;
  // Thousands groups: a comma counts only when followed by exactly three digits.
  while (i + 3 < text.size() && text[i] == ',' && is_digit(text[i + 1]) &&
         is_digit(text[i + 2]) && is_digit(text[i + 3]) &&
         (i + 4 >= text.size() || !is_digit(text[i + 4]))) {
    i += 4;
  }
  if (i < text.size() && text[i] == '.' && i + 1 < text.size() && is_digit(text[i + 1])) {
    ++i;
    while (i < text.size() && is_digit(text[i])) ++i;
  }
  return i;
}

bool word_matches_at(const std::string& lower_text, std::size_t pos, const std::string& word) {
  if (pos + word.size() > lower_text.size()) return false;
  if (lower_text.compare(pos, word.size(), word) != 0) return false;
  if (pos > 0 && is_word_char(lower_text[pos - 1])) return false;
  std::size_t end = pos + word.size();
  if (end < lower_text.size() && is_word_char(lower_text[end])) return false;
  return true;
}

// Sort by start, prefer longer spans, drop overlaps.
std::vector<Span> resolve_overlaps(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end > b.end;
  });
  std::vector<Span> out;
  for (const auto& s : spans) {
    if (!out.empty() && s.begin < out.back().end) continue;
    out.push_back(s);
  }
  return out;
}

bool overlaps_any(const Span& s, const std::vector<Span>& spans) {
  for (const auto& p : spans) {
    if (s.begin < p.end && p.begin < s.end) return true;
  }
  return false;
}

std::vector<Span> occurrences(const std::string& lower_text, const std::string& lower_needle) {
  std::vector<Span> out;
  if (lower_needle.empty()) return out;
  std::size_t pos = 0;
  while ((pos = lower_text.find(lower_needle, pos)) != std::string::npos) {
    out.push_back({pos, pos + lower_needle.size()});
    pos += 1;
  }
  return out;
}

}  // namespace

std::vector<Span> scan_currency(const std::string& text) {
  std::vector<Span> spans;
  const std::string lower_text = to_lower(text);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '$') {
      std::size_t end = consume_number(text, i + 1);
      if (end > i + 1) {
        spans.push_back({i, end});
        i = end - 1;
      }
      continue;
    }
    if (is_digit(text[i]) && (i == 0 || (!is_word_char(text[i - 1]) && text[i - 1] != '$' &&
                                         text[i - 1] != '.' && text[i - 1] != ','))) {
      std::size_t num_end = consume_number(text, i);
      std::size_t j = num_end;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
      for (const char* word : {"dollars", "dollar"}) {
        std::size_t len = std::string(word).size();
        if (word_matches_at(lower_text, j, word)) {
          spans.push_back({i, j + len});
          break;
        }
      }
      i = num_end - 1;
    }
  }
  return resolve_overlaps(std::move(spans));
}

std::vector<Span> scan_phrases(const std::string& text,
                               const std::vector<std::string>& phrases) {
  const std::string lower_text = to_lower(text);
  std::vector<Span> spans;
  for (const auto& phrase : phrases) {
    const std::string needle = to_lower(phrase);
    for (const auto& occ : occurrences(lower_text, needle)) {
      if (occ.begin > 0 && is_word_char(lower_text[occ.begin - 1])) continue;
      if (occ.end < lower_text.size() && is_word_char(lower_text[occ.end])) continue;
      spans.push_back(occ);
    }
  }
  return resolve_overlaps(std::move(spans));
}

bool contains_phrase(const std::string& text, const std::vector<std::string>& phrases) {
  return !scan_phrases(text, phrases).empty();
}

namespace {

struct TaggedSpan {
  Span span;
  const char* token;
};

std::string replace_spans(const std::string& text, std::vector<TaggedSpan> spans,
                          int& replacements) {
  std::sort(spans.begin(), spans.end(), [](const TaggedSpan& a, const TaggedSpan& b) {
    return a.span.begin < b.span.begin;
  });
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (const auto& ts : spans) {
    out.append(text, pos, ts.span.begin - pos);
    out += ts.token;
    pos = ts.span.end;
    ++replacements;
  }
  out.append(text, pos, text.size() - pos);
  return out;
}

}  // namespace

std::pair<Transcript, RedactionReport> redact_dollars(const Transcript& t) {
  return redact_dollars(t, builtin_packs().lists);
}

std::pair<Transcript, RedactionReport> redact_dollars(const Transcript& t,
                                                      const RedactionLists& lists) {
  Transcript out = t;
  RedactionReport report;
  report.variant = InferenceVariant::dollar_redacted;
  for (auto& turn : out.turns) {
    const auto currency = scan_currency(turn.text);
    std::vector<TaggedSpan> tagged;
    for (const auto& s : currency) tagged.push_back({s, kPriceRedactedToken});
    for (const auto& s : scan_phrases(turn.text, lists.budget_phrases)) {
      if (!overlaps_any(s, currency)) tagged.push_back({s, kBudgetPhraseRedactedToken});
    }
    turn.text = replace_spans(turn.text, std::move(tagged), report.replacements);
  }
  return {std::move(out), std::move(report)};
}

std::vector<Span> scan_persona(const std::string& text, const PackSet& packs) {
  // Product names and currency tokens are preserved by the persona variant, so
  // matches inside them are never flagged.
  std::vector<Span> protected_spans = scan_currency(text);
  {
    const std::string lower_text = to_lower(text);
    for (const auto& product : packs.catalog) {
      for (const auto& occ : occurrences(lower_text, to_lower(product.name())))
        protected_spans.push_back(occ);
    }
  }

  std::vector<std::string> needles = packs.lists.persona_terms;
  needles.insert(needles.end(), packs.lists.valuation_phrases.begin(),
                 packs.lists.valuation_phrases.end());
  // Bare price tokens stay: the persona variant preserves price talk, and only
  // valuation phrases from the list above are treated as financial register.
  static const std::vector<std::string> price_family{"price", "prices", "priced", "pricing"};
  for (const auto& word : packs.lists.financial_stopwords) {
    if (std::find(price_family.begin(), price_family.end(), word) == price_family.end())
      needles.push_back(word);
  }

  std::vector<Span> flagged;
  for (const auto& s : scan_phrases(text, needles)) {
    if (!overlaps_any(s, protected_spans)) flagged.push_back(s);
  }
  return flagged;
}

RedactionReport verify_redaction(const Transcript& t, InferenceVariant variant) {
  return verify_redaction(t, variant, builtin_packs());
}

RedactionReport verify_redaction(const Transcript& t, InferenceVariant variant,
                                 const PackSet& packs) {
  if (variant == InferenceVariant::full)
    throw ValidationError("verify_redaction applies to redacted variants only");
  RedactionReport report;
  report.variant = variant;
  for (std::size_t i = 0; i < t.turns.size(); ++i) {
    const std::string& text = t.turns[i].text;
    std::vector<Span> spans;
    if (variant == InferenceVariant::dollar_redacted) {
      spans = scan_currency(text);
      for (const auto& s : scan_phrases(text, packs.lists.budget_phrases)) {
        if (!overlaps_any(s, spans)) spans.push_back(s);
      }
    } else {
      spans = scan_persona(text, packs);
    }
    for (const auto& s : spans) {
      report.residual_violations.push_back(
          {static_cast<int>(i), text.substr(s.begin, s.end - s.begin)});
    }
  }
  return report;
}

std::pair<Transcript, RedactionReport> redact_persona(const Transcript& t,
                                                      CompletionBackend& backend) {
  return redact_persona(t, backend, builtin_packs());
}

std::pair<Transcript, RedactionReport> redact_persona(const Transcript& t,
                                                      CompletionBackend& backend,
                                                      const PackSet& packs) {
  Transcript out = t;
  RedactionReport report;
  report.variant = InferenceVariant::persona_redacted;
  const std::string instruction = render_persona_redaction_prompt();

  for (std::size_t i = 0; i < out.turns.size(); ++i) {
    auto& turn = out.turns[i];
    if (scan_persona(turn.text, packs).empty()) continue;  // already persona-free

    std::string redacted = backend.complete(instruction, {{Role::buyer, turn.text}});
    if (!scan_persona(redacted, packs).empty()) {
      // One re-pass, then whatever remains is reported, not fixed.
      redacted = backend.complete(instruction, {{Role::buyer, redacted}});
    }
    for (const auto& s : scan_persona(redacted, packs)) {
      report.residual_violations.push_back(
          {static_cast<int>(i), redacted.substr(s.begin, s.end - s.begin)});
    }

    int before = 0, after = 0;
    for (std::size_t pos = turn.text.find(kPersonaRedactedToken); pos != std::string::npos;
         pos = turn.text.find(kPersonaRedactedToken, pos + 1))
      ++before;
    for (std::size_t pos = redacted.find(kPersonaRedactedToken); pos != std::string::npos;
         pos = redacted.find(kPersonaRedactedToken, pos + 1))
      ++after;
    report.replacements += std::max(0, after - before);
    turn.text = std::move(redacted);
  }
  return {std::move(out), std::move(report)};
}

}  // namespace wtpleak
