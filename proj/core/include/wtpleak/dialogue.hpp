#pragma once

#include <chrono>

#include "wtpleak/backend.hpp"
#include "wtpleak/model.hpp"
#include "wtpleak/packs.hpp"
#include "wtpleak/retry.hpp"

namespace wtpleak {

struct DialogueLimits {
  int max_buyer_turns = 4;
  std::chrono::milliseconds per_call_timeout{60000};
  int max_retries = 3;
  int completion_char_cap = 4000;  // oversized completions are truncated and flagged
  RetryPolicy retry;               // sleep injection for tests; max_retries wins
};

// True iff the buyer turn commits to a purchase: it contains a phrase from the
// fixed marker list ("I'll take", "I'll go with", "I'd like to buy",
// "let's do the") case-insensitively, or a line starting with "DECISION:".
bool detect_purchase_decision(const std::string& buyer_turn);

// Runs the bounded buyer-seller loop: alternating turns starting with the
// buyer, stopping at max_buyer_turns or on a detected purchase decision.
// Throws BackendError once a completion fails past max_retries.
Transcript run_dialogue(const Instruction& instruction, const DialogueLimits& limits,
                        CompletionBackend& buyer_backend, CompletionBackend& seller_backend);
Transcript run_dialogue(const Instruction& instruction, const DialogueLimits& limits,
                        CompletionBackend& buyer_backend, CompletionBackend& seller_backend,
                        const PackSet& packs);

}  // namespace wtpleak
