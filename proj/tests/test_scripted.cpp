#include <doctest.h>

#include <map>
#include <set>

#include "wtpleak/dialogue.hpp"
#include "wtpleak/errors.hpp"
#include "wtpleak/inference.hpp"
#include "wtpleak/money.hpp"
#include "wtpleak/scripted.hpp"

using namespace wtpleak;

namespace {

DialogueLimits fast_limits() {
  DialogueLimits limits;
  limits.retry.sleep_ms = [](std::uint64_t) {};
  return limits;
}

Transcript run_scripted(const Instruction& instruction, std::uint64_t seed) {
  ScriptedBuyerBackend buyer(instruction, seed);
  ScriptedSellerBackend seller(builtin_packs().catalog, seed + 1);
  return run_dialogue(instruction, fast_limits(), buyer, seller);
}

}  // namespace

TEST_CASE("role-coherent buyer rejects numeric instructions and vice versa") {
  CHECK_THROWS_AS(scripted_role_coherent_buyer(Instruction::numeric(5000), {}, 1),
                  ValidationError);
  CHECK_THROWS_AS(
      scripted_privacy_gagged_buyer(
          Instruction::verbal(builtin_packs().profile_by_id("vp_50")), {}, 1),
      ValidationError);
}

TEST_CASE("scripted families are pure in (instruction, history, seed)") {
  const auto& packs = builtin_packs();
  Instruction verbal = Instruction::verbal(packs.profile_by_id("vp_150"));
  ChatHistory history{{Role::buyer, "q"}, {Role::seller, "a"}};
  CHECK(scripted_role_coherent_buyer(verbal, history, 42) ==
        scripted_role_coherent_buyer(verbal, history, 42));
  CHECK(scripted_role_coherent_buyer(verbal, {}, 1) !=
        scripted_role_coherent_buyer(verbal, {}, 2));

  Instruction numeric = Instruction::numeric(15000);
  CHECK(scripted_privacy_gagged_buyer(numeric, history, 7) ==
        scripted_privacy_gagged_buyer(numeric, history, 7));
}

TEST_CASE("vp_50 policy: opening mentions battery and transit, engages A/B") {
  const auto& packs = builtin_packs();
  Instruction ins = Instruction::verbal(packs.profile_by_id("vp_50"));
  std::string opening = scripted_role_coherent_buyer(ins, {}, 3);
  CHECK(opening.find("battery life") != std::string::npos);
  CHECK(opening.find("public transit") != std::string::npos);

  Transcript t = run_scripted(ins, 3);
  CHECK(engaged_codes_in_buyer_turns(t, packs.catalog) == std::vector<char>{'A', 'B'});
}

TEST_CASE("vp_500 policy: engages tier E and asks a codec question") {
  const auto& packs = builtin_packs();
  Instruction ins = Instruction::verbal(packs.profile_by_id("vp_500"));
  Transcript t = run_scripted(ins, 11);
  CHECK(engaged_codes_in_buyer_turns(t, packs.catalog) == std::vector<char>{'E'});
  bool codec_question = false;
  for (const auto& turn : t.turns) {
    if (turn.role == Role::buyer && turn.text.find("codec") != std::string::npos)
      codec_question = true;
  }
  CHECK(codec_question);
}

TEST_CASE("engagement map is injective across the six verbal cells") {
  const auto& packs = builtin_packs();
  std::set<std::vector<char>> seen;
  for (const auto& cell : packs.verbal_cell_ids()) {
    Transcript t = run_scripted(Instruction::verbal(packs.profile_by_id(cell)), 5);
    auto codes = engaged_codes_in_buyer_turns(t, packs.catalog);
    CHECK_FALSE(codes.empty());
    CHECK(seen.insert(codes).second);  // no two cells share an engagement set
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("gagged transcripts are bitwise identical across budget cells at fixed seed") {
  const auto& packs = builtin_packs();
  const std::uint64_t seed = 99;
  std::string reference;
  for (const auto& cell : packs.numeric_cells) {
    Transcript t = run_scripted(Instruction::numeric(cell.budget), seed);
    std::string rendered = render_transcript(t);
    if (reference.empty())
      reference = rendered;
    else
      CHECK(rendered == reference);
  }
}

TEST_CASE("gagged buyer never emits the budget amount") {
  for (Cents budget : {5000, 10000, 15000, 20000, 30000, 50000}) {
    Transcript t = run_scripted(Instruction::numeric(budget), 17);
    const std::string text = t.joined_text();
    for (const auto& turn : t.turns) {
      if (turn.role != Role::buyer) continue;
      CHECK(turn.text.find(format_usd(budget)) == std::string::npos);
      CHECK(turn.text.find('$') == std::string::npos);
      // No digits at all in gagged buyer turns, so no budget token can leak.
      CHECK(turn.text.find_first_of("0123456789") == std::string::npos);
    }
  }
}

TEST_CASE("scripted seller quotes prices and answers discounts honestly") {
  const auto& packs = builtin_packs();
  ChatHistory h{{Role::buyer, "Is there any discount available on the Prestige Audio "
                              "Reference if I decide today?"}};
  std::string reply = scripted_seller(packs.catalog, h, 1);
  CHECK(reply.find("10% off") != std::string::npos);
  CHECK(reply.find("$224.99") != std::string::npos);  // 249.99 less 10%

  ChatHistory generic{{Role::buyer, "What do you have?"}};
  std::string overview = scripted_seller(packs.catalog, generic, 1);
  CHECK(overview.find("$49.99") != std::string::npos);
  CHECK(overview.find("$399.99") != std::string::npos);
}

TEST_CASE("oracle decodes each role-coherent cell into its price band") {
  const auto& packs = builtin_packs();
  const std::map<std::string, std::pair<int, int>> bands{
      {"vp_50", {40, 70}},   {"vp_100", {85, 115}}, {"vp_150", {135, 165}},
      {"vp_200", {205, 235}}, {"vp_300", {285, 315}}, {"vp_500", {485, 515}}};
  for (const auto& [cell, band] : bands) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
      Transcript t = run_scripted(Instruction::verbal(packs.profile_by_id(cell)), seed);
      InferenceReport r = scripted_oracle_inference(t);
      CAPTURE(cell);
      CHECK(r.estimate >= band.first);
      CHECK(r.estimate <= band.second);
    }
  }
}

TEST_CASE("oracle returns the fixed prior for gagged transcripts") {
  for (std::uint64_t seed : {1ULL, 9ULL, 77ULL}) {
    for (Cents budget : {5000, 50000}) {
      Transcript t = run_scripted(Instruction::numeric(budget), seed);
      InferenceReport r = scripted_oracle_inference(t);
      CHECK(r.estimate == gagged_prior_estimate_dollars());
    }
  }
}

TEST_CASE("oracle is deterministic and rejects unknown dialects") {
  const auto& packs = builtin_packs();
  Transcript t = run_scripted(Instruction::verbal(packs.profile_by_id("vp_300")), 8);
  InferenceReport a = scripted_oracle_inference(t);
  InferenceReport b = scripted_oracle_inference(t);
  CHECK(a == b);

  Transcript alien;
  alien.turns = {{Role::buyer, "Greetings, stranger."}};
  CHECK_THROWS_AS(scripted_oracle_inference(alien), ValidationError);
}

TEST_CASE("stripped profiles drive the same tier policy") {
  const auto& packs = builtin_packs();
  Transcript t = run_scripted(Instruction::verbal(packs.profile_by_id("sv_500")), 21);
  CHECK(engaged_codes_in_buyer_turns(t, packs.catalog) == std::vector<char>{'E'});
}
