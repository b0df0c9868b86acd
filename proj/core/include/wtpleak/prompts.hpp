#pragma once

#include <string>
#include <vector>

#include "wtpleak/model.hpp"
#include "wtpleak/packs.hpp"

namespace wtpleak {

// Buyer system prompt. Verbal instructions embed the profile description plus
// the no-fabrication clause; numeric instructions embed the budget sentence
// block, where only the dollar figure varies across cells. Both carry the
// customer-role disambiguation preamble.
std::string render_buyer_prompt(const Instruction& instruction);
std::string render_buyer_prompt(const Instruction& instruction, const PackSet& packs);

// Seller system prompt with the full catalog, honesty, 10%-discount-cap,
// no-upsell, and no-budget-probing directives.
std::string render_seller_prompt(const std::vector<Product>& catalog);

// Inference system prompt: transcript-only WTP estimation with structured
// estimate/confidence/key-signal output. Contains no catalog content and no
// label field names; identical text on every call.
std::string render_inference_prompt();

// Instruction for the persona-redaction role: the five identity-cue categories
// to strip and the shopping-behavior content to preserve.
std::string render_persona_redaction_prompt();

}  // namespace wtpleak
