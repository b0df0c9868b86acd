#include "wtpleak/dialogue.hpp"

#include <algorithm>

#include "wtpleak/errors.hpp"
#include "wtpleak/prompts.hpp"

namespace wtpleak {

namespace {

const char* kDecisionMarkers[] = {"i'll take", "i'll go with", "i'd like to buy",
                                  "let's do the"};

std::string normalize_for_markers(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // Fold the right single quotation mark (U+2019) to an ASCII apostrophe.
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      out += '\'';
      i += 2;
      continue;
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
  }
  return out;
}

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool detect_purchase_decision(const std::string& buyer_turn) {
  const std::string normalized = normalize_for_markers(buyer_turn);
  for (const char* marker : kDecisionMarkers) {
    if (normalized.find(marker) != std::string::npos) return true;
  }
  std::size_t pos = 0;
  while (pos <= normalized.size()) {
    std::size_t eol = normalized.find('\n', pos);
    std::string line =
        normalized.substr(pos, (eol == std::string::npos ? normalized.size() : eol) - pos);
    if (trim_copy(line).rfind("decision:", 0) == 0) return true;
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return false;
}

Transcript run_dialogue(const Instruction& instruction, const DialogueLimits& limits,
                        CompletionBackend& buyer_backend, CompletionBackend& seller_backend) {
  return run_dialogue(instruction, limits, buyer_backend, seller_backend, builtin_packs());
}

Transcript run_dialogue(const Instruction& instruction, const DialogueLimits& limits,
                        CompletionBackend& buyer_backend, CompletionBackend& seller_backend,
                        const PackSet& packs) {
  if (limits.max_buyer_turns < 1)
    throw ValidationError("max_buyer_turns must be at least 1, got " +
                          std::to_string(limits.max_buyer_turns));

  const std::string buyer_prompt = render_buyer_prompt(instruction, packs);
  const std::string seller_prompt = render_seller_prompt(packs.catalog);

  RetryPolicy policy = limits.retry;
  policy.max_retries = limits.max_retries;

  Transcript transcript;
  ChatHistory buyer_view;   // buyer speaks, seller turns arrive as counterpart messages
  ChatHistory seller_view;

  auto take_turn = [&](CompletionBackend& backend, const std::string& system_prompt,
                       const ChatHistory& view, Role role) {
    std::string text = trim_copy(run_with_retries(
        [&] { return backend.complete(system_prompt, view); }, policy, nullptr));
    if (limits.completion_char_cap > 0 &&
        text.size() > static_cast<std::size_t>(limits.completion_char_cap)) {
      text.resize(static_cast<std::size_t>(limits.completion_char_cap));
      ++transcript.truncated_turns;
    }
    transcript.turns.push_back({role, text});
    buyer_view.emplace_back(role, text);
    seller_view.emplace_back(role, text);
    return text;
  };

  for (int buyer_turn = 1; buyer_turn <= limits.max_buyer_turns; ++buyer_turn) {
    std::string said = take_turn(buyer_backend, buyer_prompt, buyer_view, Role::buyer);
    if (detect_purchase_decision(said)) {
      transcript.turn_limit_hit = false;
      validate_transcript(transcript, limits.max_buyer_turns);
      return transcript;
    }
    if (buyer_turn == limits.max_buyer_turns) break;
    take_turn(seller_backend, seller_prompt, seller_view, Role::seller);
  }
  transcript.turn_limit_hit = true;
  validate_transcript(transcript, limits.max_buyer_turns);
  return transcript;
}

}  // namespace wtpleak
