#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wtpleak/backend.hpp"
#include "wtpleak/model.hpp"
#include "wtpleak/packs.hpp"

namespace wtpleak {

// Deterministic buyer families. Both are pure functions of
// (instruction, history, seed).
//
// The role-coherent family plays the assigned consumer: its opening restates
// the profile in first person, later turns engage the catalog tier nearest the
// profile's target, react to quoted prices around it, and commit within four
// turns. The map from target cell to the set of products engaged is injective
// across the six cells.
std::string scripted_role_coherent_buyer(const Instruction& instruction,
                                         const ChatHistory& history, std::uint64_t seed);

// The privacy-gagged family shops generically: its turns never depend on the
// budget value and never contain the budget amount, so transcripts are
// identical across budget cells at a fixed seed.
std::string scripted_privacy_gagged_buyer(const Instruction& instruction,
                                          const ChatHistory& history, std::uint64_t seed);

// Scripted sales associate: honest answers keyed off the latest buyer turn,
// prices always quoted, 10% discount when asked.
std::string scripted_seller(const std::vector<Product>& catalog, const ChatHistory& history,
                            std::uint64_t seed);

// Decode helpers shared with the desk-scale oracle estimator.
bool is_gagged_scripted_opening(const std::string& first_buyer_turn);
std::vector<char> engaged_codes_in_buyer_turns(const Transcript& t,
                                               const std::vector<Product>& catalog);
// +/-10 dollar shading read back from the decision phrasing; 0 when absent.
int scripted_decision_offset(const Transcript& t);

// Backend adapters.
class ScriptedBuyerBackend : public CompletionBackend {
 public:
  ScriptedBuyerBackend(Instruction instruction, std::uint64_t seed)
      : instruction_(std::move(instruction)), seed_(seed) {}
  std::string identity() const override { return "scripted-buyer:v1"; }
  std::string complete(const std::string& system_prompt, const ChatHistory& history) override;

 private:
  Instruction instruction_;
  std::uint64_t seed_;
};

class ScriptedSellerBackend : public CompletionBackend {
 public:
  ScriptedSellerBackend(std::vector<Product> catalog, std::uint64_t seed)
      : catalog_(std::move(catalog)), seed_(seed) {}
  std::string identity() const override { return "scripted-seller:v1"; }
  std::string complete(const std::string& system_prompt, const ChatHistory& history) override;

 private:
  std::vector<Product> catalog_;
  std::uint64_t seed_;
};

// Emits the oracle estimate as a JSON record, sometimes wrapped in prose so
// downstream parsing is exercised end to end.
class ScriptedOracleInferenceBackend : public CompletionBackend {
 public:
  explicit ScriptedOracleInferenceBackend(const PackSet& packs) : packs_(packs) {}
  std::string identity() const override { return "scripted-oracle-inference:v1"; }
  std::string complete(const std::string& system_prompt, const ChatHistory& history) override;

 private:
  const PackSet& packs_;
};

// Rule-based stand-in for the agent-backed persona redactor: replaces every
// span the persona scan flags with [PERSONA REDACTED].
class ScriptedPersonaRedactorBackend : public CompletionBackend {
 public:
  explicit ScriptedPersonaRedactorBackend(const PackSet& packs) : packs_(packs) {}
  std::string identity() const override { return "scripted-persona-redactor:v1"; }
  std::string complete(const std::string& system_prompt, const ChatHistory& history) override;

 private:
  const PackSet& packs_;
};

}  // namespace wtpleak
