#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wtpleak/money.hpp"

namespace wtpleak {

enum class Condition { verbal, numeric, stripped };
enum class InstructionForm { verbal, numeric };
enum class Scaffold { A, B };
enum class InferenceVariant { full, dollar_redacted, persona_redacted };
enum class Confidence { low, medium, high };
enum class TrialStatus { pending, complete, lost };
enum class ProfilePack { standard, stripped };
enum class Role { buyer, seller };

std::string to_string(Condition c);
std::string to_string(Scaffold s);
std::string to_string(InferenceVariant v);
std::string to_string(Confidence c);
std::string to_string(TrialStatus s);
std::string to_string(ProfilePack p);
std::string to_string(Role r);

Condition condition_from_string(const std::string& s);
Scaffold scaffold_from_string(const std::string& s);
InferenceVariant variant_from_string(const std::string& s);
Confidence confidence_from_string(const std::string& s);
TrialStatus status_from_string(const std::string& s);
ProfilePack pack_from_string(const std::string& s);

// One catalog entry. Codes run A..E with strictly ascending prices.
struct Product {
  char code = 'A';
  std::string description;
  Cents price = 0;
  double rating = 0.0;  // 0-5, one fractional digit
  std::string tier;
  std::string name() const;  // leading product name from the description
  bool operator==(const Product&) const = default;
};

// A verbal consumer description. target_wtp is for scoring only and never
// appears in any prompt.
struct ConsumerProfile {
  std::string id;
  std::string description;
  Cents target_wtp = 0;
  ProfilePack pack = ProfilePack::standard;
  int variant = 1;  // 1-3
  bool operator==(const ConsumerProfile&) const = default;
};

// A buyer delegation: either a verbal profile or a confidential numeric budget.
// Use the factory functions; they enforce that exactly one payload matches the form.
struct Instruction {
  InstructionForm form = InstructionForm::verbal;
  std::optional<ConsumerProfile> profile;  // verbal only
  std::optional<Cents> budget;             // numeric only
  Scaffold scaffold = Scaffold::A;
  std::string privacy_directive;  // fixed sentence block, numeric only

  static Instruction verbal(ConsumerProfile profile, Scaffold scaffold = Scaffold::A);
  static Instruction numeric(Cents budget, Scaffold scaffold = Scaffold::A);
};

// The fixed confidentiality block attached to every numeric instruction.
const std::string& numeric_privacy_directive();

struct Turn {
  Role role = Role::buyer;
  std::string text;
  bool operator==(const Turn&) const = default;
};

// Ordered buyer/seller dialogue. The only artifact the inference agent may see.
struct Transcript {
  std::vector<Turn> turns;
  bool turn_limit_hit = false;
  int truncated_turns = 0;  // completions cut at the char cap; not serialized

  std::string joined_text() const;  // turn texts joined with newlines, for scanning
};

// Throws ValidationError unless turns alternate starting with a buyer turn
// and contain at most max_buyer_turns buyer turns.
void validate_transcript(const Transcript& t, int max_buyer_turns = 4);

// Bracket-marker text format: "[BUYER] ..." / "[SELLER] ..." paragraphs
// separated by blank lines. Carries dialogue only; flags live elsewhere.
std::string render_transcript(const Transcript& t);
Transcript parse_transcript(const std::string& text);

// Sidecar ground truth for one trial. Never rendered into any prompt or
// transcript file.
struct TrialLabel {
  std::string trial_id;
  Condition condition = Condition::verbal;
  std::string cell_id;
  Cents target_wtp = 0;
  std::optional<std::string> profile_id;
  int variant = 1;
  Scaffold scaffold = Scaffold::A;
  int trial_number = 1;
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::pending;
  std::string loss_reason;

  bool operator==(const TrialLabel&) const = default;
};

std::string label_to_json(const TrialLabel& label);
TrialLabel label_from_json(const std::string& json_text);

// Parsed output of the inference agent.
struct InferenceReport {
  int estimate = 0;  // whole dollars, > 0
  Confidence confidence = Confidence::low;
  std::array<std::string, 3> key_signals{};
  InferenceVariant variant = InferenceVariant::full;
  std::string raw;
  bool signal_count_adjusted = false;  // fewer/more than 3 signals were supplied
  bool above_sanity_ceiling = false;   // kept, never clipped
  int retries_used = 0;

  bool operator==(const InferenceReport&) const = default;
};

std::string inference_report_to_json(const InferenceReport& report);
InferenceReport inference_report_from_json(const std::string& json_text);

struct PlannedTrial {
  Condition condition = Condition::verbal;
  std::string cell_id;
  int variant = 1;
  Scaffold scaffold = Scaffold::A;
  int trial_number = 1;
  std::uint64_t seed = 0;

  bool operator==(const PlannedTrial&) const = default;
};

struct ExperimentPlan {
  std::string name;
  std::uint64_t master_seed = 0;
  std::vector<PlannedTrial> trials;

  bool operator==(const ExperimentPlan&) const = default;
};

// Stable id like "verbal-vp_200-v1-sA-t007". Filesystem-safe and unique per plan.
std::string trial_id_for(const PlannedTrial& trial);

}  // namespace wtpleak
