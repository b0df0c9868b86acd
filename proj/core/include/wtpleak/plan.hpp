#pragma once

#include <string>

#include "wtpleak/model.hpp"
#include "wtpleak/packs.hpp"

namespace wtpleak {

enum class Design { main, factorial, stripped };

std::string to_string(Design d);
Design design_from_string(const std::string& s);

// Deterministic plan construction.
//   main      — verbal + numeric conditions x 6 cells x N, variant 1, scaffold A
//   factorial — verbal cells x the 5 non-baseline (variant, scaffold) combos x N
//   stripped  — stripped-vocabulary cells x N, variant 1, scaffold A
// Per-trial seeds derive from (master_seed, condition, cell, variant, scaffold,
// trial_number), so identical inputs yield byte-identical plans.
ExperimentPlan build_plan(Design design, int trials_per_cell, std::uint64_t master_seed);
ExperimentPlan build_plan(Design design, int trials_per_cell, std::uint64_t master_seed,
                          const PackSet& packs);

std::uint64_t trial_seed(std::uint64_t master_seed, const PlannedTrial& trial);

// FNV-1a 64 over the canonical serialization; guards against mixing runs.
std::string plan_digest(const ExperimentPlan& plan);

std::string plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const std::string& json_text);

}  // namespace wtpleak
