#include "wtpleak/plan.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "wtpleak/errors.hpp"
#include "wtpleak/rng.hpp"

namespace wtpleak {

using nlohmann::json;

std::string to_string(Design d) {
  switch (d) {
    case Design::main: return "main";
    case Design::factorial: return "factorial";
    case Design::stripped: return "stripped";
  }
  return "main";
}

Design design_from_string(const std::string& s) {
  if (s == "main") return Design::main;
  if (s == "factorial") return Design::factorial;
  if (s == "stripped") return Design::stripped;
  throw ValidationError("unknown design: '" + s + "'");
}

std::uint64_t trial_seed(std::uint64_t master_seed, const PlannedTrial& trial) {
  std::uint64_t cell_hash = 1469598103934665603ULL;
  for (char c : trial.cell_id) {
    cell_hash ^= static_cast<unsigned char>(c);
    cell_hash *= 1099511628211ULL;
  }
  std::uint64_t tuple = mix_seed(static_cast<std::uint64_t>(trial.condition), cell_hash,
                                 static_cast<std::uint64_t>(trial.variant) * 8 +
                                     static_cast<std::uint64_t>(trial.scaffold),
                                 static_cast<std::uint64_t>(trial.trial_number));
  return mix_seed(master_seed, tuple);
}

ExperimentPlan build_plan(Design design, int trials_per_cell, std::uint64_t master_seed) {
  return build_plan(design, trials_per_cell, master_seed, builtin_packs());
}

ExperimentPlan build_plan(Design design, int trials_per_cell, std::uint64_t master_seed,
                          const PackSet& packs) {
  if (trials_per_cell < 1)
    throw ValidationError("trials_per_cell must be at least 1, got " +
                          std::to_string(trials_per_cell));

  ExperimentPlan plan;
  plan.name = to_string(design);
  plan.master_seed = master_seed;

  auto add = [&](Condition condition, const std::string& cell, int variant, Scaffold scaffold) {
    for (int t = 1; t <= trials_per_cell; ++t) {
      PlannedTrial trial{condition, cell, variant, scaffold, t, 0};
      trial.seed = trial_seed(master_seed, trial);
      plan.trials.push_back(std::move(trial));
    }
  };

  switch (design) {
    case Design::main:
      for (const auto& cell : packs.verbal_cell_ids())
        add(Condition::verbal, cell, 1, Scaffold::A);
      for (const auto& cell : packs.numeric_cell_ids())
        add(Condition::numeric, cell, 1, Scaffold::A);
      break;
    case Design::factorial: {
      // All (variant, scaffold) combos except the (1, A) baseline, which the
      // main design already covers.
      const std::pair<int, Scaffold> combos[] = {{1, Scaffold::B},
                                                 {2, Scaffold::A},
                                                 {2, Scaffold::B},
                                                 {3, Scaffold::A},
                                                 {3, Scaffold::B}};
      for (const auto& cell : packs.verbal_cell_ids()) {
        for (const auto& [variant, scaffold] : combos) {
          packs.profile_for(cell, variant);  // fail early if the variant pack is missing
          packs.scaffold(scaffold);
          add(Condition::verbal, cell, variant, scaffold);
        }
      }
      break;
    }
    case Design::stripped:
      for (const auto& cell : packs.stripped_cell_ids())
        add(Condition::stripped, cell, 1, Scaffold::A);
      break;
  }

  std::set<std::string> ids;
  for (const auto& trial : plan.trials) {
    if (!ids.insert(trial_id_for(trial)).second)
      throw ValidationError("duplicate trial tuple in plan: " + trial_id_for(trial));
  }
  return plan;
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json j;
  j["name"] = plan.name;
  j["master_seed"] = plan.master_seed;
  j["trials"] = json::array();
  for (const auto& t : plan.trials) {
    j["trials"].push_back({{"condition", to_string(t.condition)},
                           {"cell_id", t.cell_id},
                           {"variant", t.variant},
                           {"scaffold", to_string(t.scaffold)},
                           {"trial_number", t.trial_number},
                           {"seed", t.seed}});
  }
  return j.dump(2) + "\n";
}

ExperimentPlan plan_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("plan file is not valid JSON: ") + e.what());
  }
  try {
    ExperimentPlan plan;
    plan.name = j.at("name").get<std::string>();
    plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& e : j.at("trials")) {
      PlannedTrial t;
      t.condition = condition_from_string(e.at("condition").get<std::string>());
      t.cell_id = e.at("cell_id").get<std::string>();
      t.variant = e.at("variant").get<int>();
      t.scaffold = scaffold_from_string(e.at("scaffold").get<std::string>());
      t.trial_number = e.at("trial_number").get<int>();
      t.seed = e.at("seed").get<std::uint64_t>();
      plan.trials.push_back(std::move(t));
    }
    return plan;
  } catch (const json::exception& e) {
    throw DataError(std::string("plan file missing field: ") + e.what());
  }
}

std::string plan_digest(const ExperimentPlan& plan) {
  const std::string canon = plan_to_json(plan);
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : canon) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wtpleak
