#include "fixtures.hpp"

#include "wtpleak/dialogue.hpp"
#include "wtpleak/packs.hpp"
#include "wtpleak/scripted.hpp"

namespace wtpleak::fixtures {

std::vector<Transcript> fixture_corpus() {
  std::vector<Transcript> corpus;
  corpus.push_back(grad_student_dialogue());

  for (const auto& opening : persona_free_openings()) {
    Transcript t;
    t.turns = {{Role::buyer, opening}};
    corpus.push_back(std::move(t));
  }

  // Hand-built currency and budget-phrase edge cases.
  const char* texts[] = {
      "The flagship pair runs $1,299.00 or 50 dollars a month on a plan.",
      "My budget is $200, but I can afford to spend a little more for comfort.",
      "Keep it within my budget please; my spending limit is firm.",
      "It was priced at $49.99 today, down from  $60.",
      "Somewhere around 200 would be fine, say 150 dollars if pressed.",
      "No amounts here, just features and comfort talk.",
      "$5 now, $15.50 later, $1,000,000 never.",
      "The max I can spend is 75 dollars, full stop.",
  };
  for (const char* text : texts) {
    Transcript t;
    t.turns = {{Role::buyer, text}, {Role::seller, "Noted, let me show you options."}};
    corpus.push_back(std::move(t));
  }

  // Scripted runs across all cells, both families, a few seeds each.
  const auto& packs = builtin_packs();
  DialogueLimits limits;
  limits.retry.sleep_ms = [](std::uint64_t) {};
  auto run_one = [&](const Instruction& instruction, std::uint64_t seed) {
    ScriptedBuyerBackend buyer(instruction, seed);
    ScriptedSellerBackend seller(packs.catalog, seed + 1);
    corpus.push_back(run_dialogue(instruction, limits, buyer, seller, packs));
  };
  for (const auto& cell : packs.verbal_cell_ids()) {
    for (std::uint64_t seed : {101ULL, 202ULL, 303ULL})
      run_one(Instruction::verbal(packs.profile_by_id(cell)), seed);
  }
  for (const auto& cell : packs.stripped_cell_ids())
    run_one(Instruction::verbal(packs.profile_by_id(cell)), 404);
  for (const auto& cell : packs.numeric_cells) {
    for (std::uint64_t seed : {505ULL, 606ULL}) run_one(Instruction::numeric(cell.budget), seed);
  }
  return corpus;
}

}  // namespace wtpleak::fixtures
