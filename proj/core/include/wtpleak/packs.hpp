#pragma once

#include <map>
#include <string>
#include <vector>

#include "wtpleak/model.hpp"

namespace wtpleak {

// One numeric-budget cell: the target IS the imprinted budget.
struct NumericCell {
  std::string id;  // np_50 .. np_500
  Cents budget = 0;
  bool operator==(const NumericCell&) const = default;
};

// A buyer system-prompt scaffold. Scaffold A is the original wording; any
// other scaffold is a paraphrase carrying the same fixed sentence blocks.
struct PromptScaffold {
  Scaffold id = Scaffold::A;
  std::string task_block;      // shared shopping directives
  std::string verbal_intro;    // line introducing the profile description
  bool task_block_first = false;
  bool synthetic = false;  // placeholder text, replaceable via user-supplied packs
  bool operator==(const PromptScaffold&) const = default;
};

// Plain-text word/phrase lists used by the redaction module. One entry per line
// in the on-disk form.
struct RedactionLists {
  std::vector<std::string> budget_phrases;
  std::vector<std::string> financial_stopwords;
  std::vector<std::string> valuation_phrases;
  std::vector<std::string> persona_terms;
  bool operator==(const RedactionLists&) const = default;
};

// Everything data-driven in one bundle: catalog, profile packs, numeric cells,
// scaffolds, and redaction lists, each with a version string recorded in run
// manifests.
struct PackSet {
  std::vector<Product> catalog;
  std::vector<ConsumerProfile> profiles;  // standard pack, variants 1-3
  std::vector<ConsumerProfile> stripped_profiles;
  std::vector<NumericCell> numeric_cells;
  std::vector<PromptScaffold> scaffolds;
  RedactionLists lists;
  std::map<std::string, std::string> versions;

  bool operator==(const PackSet&) const = default;

  // Imprinted target for a profile or numeric cell id. Throws LookupError
  // naming the id when unknown.
  Cents target_for_cell(const std::string& cell_id) const;

  const ConsumerProfile& profile_by_id(const std::string& id) const;
  const NumericCell& numeric_cell_by_id(const std::string& id) const;
  // Profile for a (cell, variant) pair; variant 1 is the cell's own profile,
  // variants 2-3 come from the synthetic/factorial entries for the same target.
  const ConsumerProfile& profile_for(const std::string& cell_id, int variant) const;
  const PromptScaffold& scaffold(Scaffold id) const;

  std::vector<std::string> verbal_cell_ids() const;    // vp_*, ascending target
  std::vector<std::string> stripped_cell_ids() const;  // sv_*, ascending target
  std::vector<std::string> numeric_cell_ids() const;   // np_*, ascending target

  // Throws ValidationError when any pack invariant fails (catalog prices not
  // ascending, currency amounts inside profile text, stop words in the
  // stripped pack, ...).
  void validate() const;
};

// The compiled-in packs.
const PackSet& builtin_packs();

// Directory round trip. save_packs writes one file per pack; load_packs reads
// the same layout back. Missing files fall back to the built-in pack so a
// directory can override selectively.
void save_packs(const PackSet& packs, const std::string& dir);
PackSet load_packs(const std::string& dir);

}  // namespace wtpleak
