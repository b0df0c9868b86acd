#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wtpleak/backend.hpp"
#include "wtpleak/model.hpp"
#include "wtpleak/packs.hpp"
#include "wtpleak/plan.hpp"
#include "wtpleak/retry.hpp"
#include "wtpleak/stats.hpp"

namespace wtpleak {

struct BackendConfig {
  std::string kind = "scripted";  // scripted | remote
  std::string endpoint;
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "WTPLEAK_API_KEY";
  int timeout_ms = 60000;
  int max_retries = 3;
  std::uint64_t backoff_base_ms = 500;
  std::uint64_t backoff_cap_ms = 8000;
};

// One declarative file drives a run; CLI flags override individual keys.
struct RunConfig {
  std::string run_dir = "run";
  Design design = Design::main;
  int trials_per_cell = 60;
  std::uint64_t master_seed = 42;
  std::vector<InferenceVariant> variants{InferenceVariant::full,
                                         InferenceVariant::dollar_redacted};
  BackendConfig backend;
  int concurrency = 4;
  int max_buyer_turns = 4;
  int completion_char_cap = 4000;
  int bootstrap_resamples = 2000;
  int sanity_ceiling_dollars = 10000;
  std::optional<std::string> packs_dir;

  PackSet load_pack_set() const;
};

RunConfig config_from_json(const std::string& json_text);
std::string config_to_json(const RunConfig& config);
RunConfig load_config_file(const std::filesystem::path& path);

struct TrialRecord {
  TrialStatus status = TrialStatus::pending;
  std::string reason;
  bool turn_limit_hit = false;
  int truncated_turns = 0;
};

// Run-level bookkeeping: which trials are done, which were lost and why, and
// exactly which plan, packs, and backend produced them.
struct RunManifest {
  std::string run_id;
  std::string plan_digest;
  std::uint64_t master_seed = 0;
  std::string backend_identity;
  std::map<std::string, std::string> pack_versions;
  std::vector<std::pair<std::string, TrialRecord>> trials;  // plan order

  int count(TrialStatus status) const;
  TrialRecord* find(const std::string& trial_id);
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& json_text);

// Per-trial backend construction, so scripted families can bind each trial's
// instruction and seed and fault injection can target specific trials.
class BackendProvider {
 public:
  virtual ~BackendProvider() = default;
  virtual std::string identity() const = 0;
  virtual std::unique_ptr<CompletionBackend> buyer(const PlannedTrial& trial,
                                                   const Instruction& instruction) = 0;
  virtual std::unique_ptr<CompletionBackend> seller(const PlannedTrial& trial) = 0;
  virtual std::unique_ptr<CompletionBackend> inference(const std::string& trial_id,
                                                       InferenceVariant variant) = 0;
  virtual std::unique_ptr<CompletionBackend> persona_redactor(const std::string& trial_id) = 0;
};

// Scripted or remote per config.backend.kind.
std::unique_ptr<BackendProvider> make_backend_provider(const RunConfig& config,
                                                       const PackSet& packs);

struct RunPaths {
  std::filesystem::path root;
  std::filesystem::path plan_file() const { return root / "plan.json"; }
  std::filesystem::path manifest_file() const { return root / "manifest.json"; }
  std::filesystem::path trials_dir() const { return root / "trials"; }
  std::filesystem::path inference_dir() const { return root / "inference"; }
  std::filesystem::path reports_dir() const { return root / "reports"; }
  std::filesystem::path transcript_file(const std::string& trial_id) const;
  std::filesystem::path transcript_variant_file(const std::string& trial_id,
                                                InferenceVariant variant) const;
  std::filesystem::path sidecar_file(const std::string& trial_id) const;
  std::filesystem::path inference_file(const std::string& trial_id,
                                       InferenceVariant variant) const;
};

// Builds the instruction a planned trial delegates to its buyer.
Instruction instruction_for(const PlannedTrial& trial, const PackSet& packs);

TrialLabel label_for(const PlannedTrial& trial, const PackSet& packs);

// Writes the transcript (dialogue only, bracket-marker format) and the sidecar
// label next to each other. Identical rewrites are no-ops; a path collision
// with different content throws.
struct TrialFilePaths {
  std::filesystem::path transcript;
  std::filesystem::path sidecar;
};
TrialFilePaths write_trial(const Transcript& t, const TrialLabel& label,
                           const std::filesystem::path& dir);

Transcript load_transcript(const std::filesystem::path& file);
TrialLabel load_label(const std::filesystem::path& file);

// Runs every pending trial of the plan under the configured concurrency bound.
// Fresh directories get plan + manifest written; re-invocation resumes,
// refusing to mix plans via the digest check. Lost trials keep a sidecar and a
// reason but no transcript.
RunManifest execute(const ExperimentPlan& plan, const RunConfig& config,
                    BackendProvider& provider);

struct InferencePassResult {
  std::map<std::string, int> records_per_variant;  // variant name -> count
  std::vector<std::string> warnings;
  int total() const;
};

// For each completed trial and requested variant, applies the matching
// redaction (none / dollar / persona), runs inference, and persists one record
// per (trial, variant). Missing transcripts are skipped with a warning;
// persona redaction applies to profile-backed conditions only.
InferencePassResult run_inference_pass(const std::filesystem::path& run_dir,
                                       const std::vector<InferenceVariant>& variants,
                                       const RunConfig& config, BackendProvider& provider);

// Pre-materializes redacted transcript variants alongside the originals.
InferencePassResult run_redaction_pass(const std::filesystem::path& run_dir,
                                       const std::vector<InferenceVariant>& variants,
                                       const RunConfig& config, BackendProvider& provider);

// Computes MetricsReports from persisted inference records, grouped by
// (condition, variant). Factorial data additionally gets the design-aware
// bootstrap and the variance decomposition.
std::vector<stats::MetricsReport> compute_metrics(const std::filesystem::path& run_dir,
                                                  const RunConfig& config);

struct ReportResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> summary_lines;
};

// Emits metrics JSON, cell CSVs, plot-data CSVs, condition comparisons, and
// the decomposition table into <run_dir>/reports.
ReportResult report(const std::filesystem::path& run_dir, const RunConfig& config);

// Appends fresh trial numbers to cells with lost trials (losses are never
// refilled in place) and updates plan + manifest digests atomically.
struct TopUpResult {
  int appended = 0;
  std::vector<std::string> new_trial_ids;
};
TopUpResult top_up(const std::filesystem::path& run_dir, const RunConfig& config);

// Audit scan: the assembled inference input for every completed trial must
// contain no sidecar label value and no catalog text that the dialogue itself
// did not carry.
struct IsolationViolation {
  std::string trial_id;
  std::string detail;
};
std::vector<IsolationViolation> scan_isolation(const std::filesystem::path& run_dir,
                                               const PackSet& packs);

}  // namespace wtpleak
