#include "wtpleak/harness.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "wtpleak/dialogue.hpp"
#include "wtpleak/errors.hpp"
#include "wtpleak/fsutil.hpp"
#include "wtpleak/inference.hpp"
#include "wtpleak/prompts.hpp"
#include "wtpleak/redaction.hpp"
#include "wtpleak/remote_backend.hpp"
#include "wtpleak/rng.hpp"
#include "wtpleak/scripted.hpp"

namespace wtpleak {

namespace fs = std::filesystem;
using nlohmann::json;

// --- config ------------------------------------------------------------

PackSet RunConfig::load_pack_set() const {
  return packs_dir ? load_packs(*packs_dir) : builtin_packs();
}

RunConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c.run_dir = j.value("run_dir", c.run_dir);
    if (j.contains("design")) c.design = design_from_string(j["design"].get<std::string>());
    c.trials_per_cell = j.value("trials_per_cell", c.trials_per_cell);
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("variants")) {
      c.variants.clear();
      for (const auto& v : j["variants"])
        c.variants.push_back(variant_from_string(v.get<std::string>()));
    }
    if (j.contains("backend")) {
      const auto& b = j["backend"];
      c.backend.kind = b.value("kind", c.backend.kind);
      c.backend.endpoint = b.value("endpoint", c.backend.endpoint);
      c.backend.path = b.value("path", c.backend.path);
      c.backend.model = b.value("model", c.backend.model);
      c.backend.api_key_env = b.value("api_key_env", c.backend.api_key_env);
      c.backend.timeout_ms = b.value("timeout_ms", c.backend.timeout_ms);
      c.backend.max_retries = b.value("max_retries", c.backend.max_retries);
      c.backend.backoff_base_ms = b.value("backoff_base_ms", c.backend.backoff_base_ms);
      c.backend.backoff_cap_ms = b.value("backoff_cap_ms", c.backend.backoff_cap_ms);
    }
    c.concurrency = j.value("concurrency", c.concurrency);
    c.max_buyer_turns = j.value("max_buyer_turns", c.max_buyer_turns);
    c.completion_char_cap = j.value("completion_char_cap", c.completion_char_cap);
    c.bootstrap_resamples = j.value("bootstrap_resamples", c.bootstrap_resamples);
    c.sanity_ceiling_dollars = j.value("sanity_ceiling_dollars", c.sanity_ceiling_dollars);
    if (j.contains("packs_dir")) c.packs_dir = j["packs_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  if (c.trials_per_cell < 1) throw ValidationError("trials_per_cell must be >= 1");
  if (c.concurrency < 1) throw ValidationError("concurrency must be >= 1");
  if (c.backend.kind != "scripted" && c.backend.kind != "remote")
    throw ValidationError("backend.kind must be 'scripted' or 'remote'");
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["run_dir"] = c.run_dir;
  j["design"] = to_string(c.design);
  j["trials_per_cell"] = c.trials_per_cell;
  j["master_seed"] = c.master_seed;
  j["variants"] = json::array();
  for (const auto& v : c.variants) j["variants"].push_back(to_string(v));
  j["backend"] = {{"kind", c.backend.kind},
                  {"endpoint", c.backend.endpoint},
                  {"path", c.backend.path},
                  {"model", c.backend.model},
                  {"api_key_env", c.backend.api_key_env},
                  {"timeout_ms", c.backend.timeout_ms},
                  {"max_retries", c.backend.max_retries},
                  {"backoff_base_ms", c.backend.backoff_base_ms},
                  {"backoff_cap_ms", c.backend.backoff_cap_ms}};
  j["concurrency"] = c.concurrency;
  j["max_buyer_turns"] = c.max_buyer_turns;
  j["completion_char_cap"] = c.completion_char_cap;
  j["bootstrap_resamples"] = c.bootstrap_resamples;
  j["sanity_ceiling_dollars"] = c.sanity_ceiling_dollars;
  if (c.packs_dir) j["packs_dir"] = *c.packs_dir;
  return j.dump(2) + "\n";
}

RunConfig load_config_file(const fs::path& path) {
  return config_from_json(read_file(path));
}

// --- manifest ----------------------------------------------------------

int RunManifest::count(TrialStatus status) const {
  int n = 0;
  for (const auto& [id, record] : trials)
    if (record.status == status) ++n;
  return n;
}

TrialRecord* RunManifest::find(const std::string& trial_id) {
  for (auto& [id, record] : trials)
    if (id == trial_id) return &record;
  return nullptr;
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["run_id"] = m.run_id;
  j["plan_digest"] = m.plan_digest;
  j["master_seed"] = m.master_seed;
  j["backend_identity"] = m.backend_identity;
  j["pack_versions"] = m.pack_versions;
  j["trials"] = json::array();
  for (const auto& [id, record] : m.trials) {
    json r = {{"trial_id", id}, {"status", to_string(record.status)}};
    if (!record.reason.empty()) r["reason"] = record.reason;
    if (record.turn_limit_hit) r["turn_limit_hit"] = true;
    if (record.truncated_turns > 0) r["truncated_turns"] = record.truncated_turns;
    j["trials"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.plan_digest = j.at("plan_digest").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.backend_identity = j.value("backend_identity", "");
    if (j.contains("pack_versions"))
      m.pack_versions = j["pack_versions"].get<std::map<std::string, std::string>>();
    for (const auto& e : j.at("trials")) {
      TrialRecord r;
      r.status = status_from_string(e.at("status").get<std::string>());
      r.reason = e.value("reason", "");
      r.turn_limit_hit = e.value("turn_limit_hit", false);
      r.truncated_turns = e.value("truncated_turns", 0);
      m.trials.emplace_back(e.at("trial_id").get<std::string>(), std::move(r));
    }
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest missing field: ") + e.what());
  }
}

// --- backend providers ---------------------------------------------------

namespace {

class ScriptedProvider : public BackendProvider {
 public:
  explicit ScriptedProvider(PackSet packs) : packs_(std::move(packs)) {}
  std::string identity() const override { return "scripted:v1"; }
  std::unique_ptr<CompletionBackend> buyer(const PlannedTrial& trial,
                                           const Instruction& instruction) override {
    return std::make_unique<ScriptedBuyerBackend>(instruction, trial.seed);
  }
  std::unique_ptr<CompletionBackend> seller(const PlannedTrial& trial) override {
    return std::make_unique<ScriptedSellerBackend>(packs_.catalog,
                                                   mix_seed(trial.seed, 0x5e11e5));
  }
  std::unique_ptr<CompletionBackend> inference(const std::string&, InferenceVariant) override {
    return std::make_unique<ScriptedOracleInferenceBackend>(packs_);
  }
  std::unique_ptr<CompletionBackend> persona_redactor(const std::string&) override {
    return std::make_unique<ScriptedPersonaRedactorBackend>(packs_);
  }

 private:
  PackSet packs_;
};

class RemoteProvider : public BackendProvider {
 public:
  explicit RemoteProvider(const BackendConfig& config) : config_(config) {}
  std::string identity() const override {
    return "remote:" + config_.model + "@" + config_.endpoint;
  }
  std::unique_ptr<CompletionBackend> buyer(const PlannedTrial&, const Instruction&) override {
    return make();
  }
  std::unique_ptr<CompletionBackend> seller(const PlannedTrial&) override { return make(); }
  std::unique_ptr<CompletionBackend> inference(const std::string&, InferenceVariant) override {
    return make();
  }
  std::unique_ptr<CompletionBackend> persona_redactor(const std::string&) override {
    return make();
  }

 private:
  std::unique_ptr<CompletionBackend> make() const {
    RemoteBackendSettings settings;
    settings.endpoint = config_.endpoint;
    settings.path = config_.path;
    settings.model = config_.model;
    settings.api_key_env = config_.api_key_env;
    settings.timeout_ms = config_.timeout_ms;
    return std::make_unique<RemoteBackend>(settings);
  }
  BackendConfig config_;
};

}  // namespace

std::unique_ptr<BackendProvider> make_backend_provider(const RunConfig& config,
                                                       const PackSet& packs) {
  if (config.backend.kind == "remote") return std::make_unique<RemoteProvider>(config.backend);
  return std::make_unique<ScriptedProvider>(packs);
}

// --- paths and per-trial files -------------------------------------------

fs::path RunPaths::transcript_file(const std::string& trial_id) const {
  return trials_dir() / (trial_id + ".txt");
}

fs::path RunPaths::transcript_variant_file(const std::string& trial_id,
                                           InferenceVariant variant) const {
  if (variant == InferenceVariant::full) return transcript_file(trial_id);
  return trials_dir() / (trial_id + "." + to_string(variant) + ".txt");
}

fs::path RunPaths::sidecar_file(const std::string& trial_id) const {
  return trials_dir() / (trial_id + ".label.json");
}

fs::path RunPaths::inference_file(const std::string& trial_id,
                                  InferenceVariant variant) const {
  return inference_dir() / (trial_id + "." + to_string(variant) + ".json");
}

Instruction instruction_for(const PlannedTrial& trial, const PackSet& packs) {
  switch (trial.condition) {
    case Condition::verbal:
      return Instruction::verbal(packs.profile_for(trial.cell_id, trial.variant),
                                 trial.scaffold);
    case Condition::stripped:
      return Instruction::verbal(packs.profile_for(trial.cell_id, trial.variant),
                                 trial.scaffold);
    case Condition::numeric:
      return Instruction::numeric(packs.numeric_cell_by_id(trial.cell_id).budget,
                                  trial.scaffold);
  }
  throw ValidationError("unreachable condition");
}

TrialLabel label_for(const PlannedTrial& trial, const PackSet& packs) {
  TrialLabel label;
  label.trial_id = trial_id_for(trial);
  label.condition = trial.condition;
  label.cell_id = trial.cell_id;
  label.target_wtp = packs.target_for_cell(trial.cell_id);
  if (trial.condition != Condition::numeric)
    label.profile_id = packs.profile_for(trial.cell_id, trial.variant).id;
  label.variant = trial.variant;
  label.scaffold = trial.scaffold;
  label.trial_number = trial.trial_number;
  label.seed = trial.seed;
  label.status = TrialStatus::pending;
  return label;
}

namespace {

void write_if_changed(const fs::path& path, const std::string& content, const char* what) {
  std::error_code ec;
  if (fs::exists(path, ec)) {
    if (read_file(path) == content) return;  // idempotent rewrite
    throw DataError(std::string(what) + " collision with different content: " +
                    path.string());
  }
  write_file_atomic(path, content);
}

}  // namespace

TrialFilePaths write_trial(const Transcript& t, const TrialLabel& label, const fs::path& dir) {
  if (label.trial_id.empty()) throw ValidationError("trial label has no trial_id");
  fs::create_directories(dir);
  TrialFilePaths paths;
  paths.transcript = dir / (label.trial_id + ".txt");
  paths.sidecar = dir / (label.trial_id + ".label.json");
  write_if_changed(paths.transcript, render_transcript(t), "transcript");
  write_if_changed(paths.sidecar, label_to_json(label), "sidecar");
  return paths;
}

Transcript load_transcript(const fs::path& file) { return parse_transcript(read_file(file)); }

TrialLabel load_label(const fs::path& file) { return label_from_json(read_file(file)); }

// --- execute ---------------------------------------------------------------

namespace {

void run_parallel(std::vector<std::function<void()>>& tasks, int concurrency) {
  if (concurrency <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      tasks[i]();
    }
  };
  std::vector<std::thread> threads;
  const int n = std::min<int>(concurrency, static_cast<int>(tasks.size()));
  threads.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

RetryPolicy retry_policy_from(const BackendConfig& backend) {
  RetryPolicy policy;
  policy.max_retries = backend.max_retries;
  policy.base_delay_ms = backend.backoff_base_ms;
  policy.cap_delay_ms = backend.backoff_cap_ms;
  return policy;
}

}  // namespace

RunManifest execute(const ExperimentPlan& plan, const RunConfig& config,
                    BackendProvider& provider) {
  const PackSet packs = config.load_pack_set();
  RunPaths paths{fs::path(config.run_dir)};
  fs::create_directories(paths.trials_dir());

  const std::string digest = plan_digest(plan);
  if (fs::exists(paths.plan_file())) {
    const std::string stored = plan_digest(plan_from_json(read_file(paths.plan_file())));
    if (stored != digest)
      throw DataError("refusing to mix runs: plan digest " + digest +
                      " does not match stored " + stored);
  } else {
    write_file_atomic(paths.plan_file(), plan_to_json(plan));
  }

  RunManifest manifest;
  if (fs::exists(paths.manifest_file())) {
    manifest = manifest_from_json(read_file(paths.manifest_file()));
    if (manifest.plan_digest != digest)
      throw DataError("refusing to mix runs: manifest digest " + manifest.plan_digest +
                      " does not match plan digest " + digest);
  } else {
    manifest.run_id = plan.name + "-" + digest.substr(digest.size() - 8);
    manifest.plan_digest = digest;
    manifest.master_seed = plan.master_seed;
    manifest.backend_identity = provider.identity();
    manifest.pack_versions = packs.versions;
    for (const auto& trial : plan.trials)
      manifest.trials.emplace_back(trial_id_for(trial), TrialRecord{});
  }

  std::map<std::string, const PlannedTrial*> by_id;
  for (const auto& trial : plan.trials) by_id[trial_id_for(trial)] = &trial;

  std::mutex manifest_mutex;
  std::vector<std::function<void()>> tasks;

  for (auto& [trial_id_str, record] : manifest.trials) {
    if (record.status == TrialStatus::complete) {
      if (!fs::exists(paths.transcript_file(trial_id_str)) ||
          !fs::exists(paths.sidecar_file(trial_id_str)))
        throw DataError("manifest marks " + trial_id_str +
                        " complete but its files are missing");
      continue;
    }
    if (record.status == TrialStatus::lost) continue;

    auto it = by_id.find(trial_id_str);
    if (it == by_id.end())
      throw DataError("manifest trial " + trial_id_str + " not in plan");
    const PlannedTrial* trial = it->second;
    TrialRecord* record_ptr = &record;
    const std::string trial_id = trial_id_str;

    // Reconcile: files already present from an interrupted run count as done.
    if (fs::exists(paths.transcript_file(trial_id)) &&
        fs::exists(paths.sidecar_file(trial_id))) {
      TrialLabel stored = load_label(paths.sidecar_file(trial_id));
      if (stored.status == TrialStatus::complete) {
        record.status = TrialStatus::complete;
        continue;
      }
    }

    tasks.emplace_back([&, trial, record_ptr, trial_id] {
      TrialLabel label = label_for(*trial, packs);
      try {
        const Instruction instruction = instruction_for(*trial, packs);
        auto buyer = provider.buyer(*trial, instruction);
        auto seller = provider.seller(*trial);

        DialogueLimits limits;
        limits.max_buyer_turns = config.max_buyer_turns;
        limits.max_retries = config.backend.max_retries;
        limits.completion_char_cap = config.completion_char_cap;
        limits.retry = retry_policy_from(config.backend);

        Transcript transcript = run_dialogue(instruction, limits, *buyer, *seller, packs);
        label.status = TrialStatus::complete;
        write_trial(transcript, label, paths.trials_dir());

        std::lock_guard<std::mutex> lock(manifest_mutex);
        record_ptr->status = TrialStatus::complete;
        record_ptr->turn_limit_hit = transcript.turn_limit_hit;
        record_ptr->truncated_turns = transcript.truncated_turns;
      } catch (const BackendError& e) {
        label.status = TrialStatus::lost;
        label.loss_reason = e.what();
        write_file_atomic(paths.sidecar_file(trial_id), label_to_json(label));
        std::lock_guard<std::mutex> lock(manifest_mutex);
        record_ptr->status = TrialStatus::lost;
        record_ptr->reason = e.what();
      }
    });
  }

  run_parallel(tasks, config.concurrency);
  write_file_atomic(paths.manifest_file(), manifest_to_json(manifest));
  return manifest;
}

// --- inference and redaction passes ----------------------------------------

int InferencePassResult::total() const {
  int n = 0;
  for (const auto& [variant, count] : records_per_variant) n += count;
  return n;
}

namespace {

bool persona_applicable(Condition condition) { return condition != Condition::numeric; }

struct LoadedRun {
  RunManifest manifest;
  std::map<std::string, TrialLabel> labels;  // completed trials only
};

LoadedRun load_completed(const RunPaths& paths) {
  if (!fs::exists(paths.manifest_file()))
    throw DataError("no manifest in run dir: " + paths.root.string());
  LoadedRun run;
  run.manifest = manifest_from_json(read_file(paths.manifest_file()));
  for (const auto& [trial_id, record] : run.manifest.trials) {
    if (record.status != TrialStatus::complete) continue;
    run.labels.emplace(trial_id, load_label(paths.sidecar_file(trial_id)));
  }
  return run;
}

// Applies the variant's redaction, persisting the redacted transcript
// alongside the original. Returns the transcript the inference agent may see.
Transcript materialize_variant(const RunPaths& paths, const std::string& trial_id,
                               InferenceVariant variant, const Transcript& full,
                               const PackSet& packs, BackendProvider& provider) {
  if (variant == InferenceVariant::full) return full;
  const fs::path file = paths.transcript_variant_file(trial_id, variant);
  if (fs::exists(file)) return load_transcript(file);

  Transcript redacted;
  if (variant == InferenceVariant::dollar_redacted) {
    redacted = redact_dollars(full, packs.lists).first;
  } else {
    auto redactor = provider.persona_redactor(trial_id);
    redacted = redact_persona(full, *redactor, packs).first;
  }
  write_file_atomic(file, render_transcript(redacted));
  return redacted;
}

}  // namespace

InferencePassResult run_redaction_pass(const fs::path& run_dir,
                                       const std::vector<InferenceVariant>& variants,
                                       const RunConfig& config, BackendProvider& provider) {
  const PackSet packs = config.load_pack_set();
  RunPaths paths{run_dir};
  LoadedRun run = load_completed(paths);

  InferencePassResult result;
  for (const auto& variant : variants) {
    if (variant == InferenceVariant::full) continue;
    result.records_per_variant[to_string(variant)] = 0;
  }

  std::mutex mutex;
  std::vector<std::function<void()>> tasks;
  for (const auto& [trial_id, label] : run.labels) {
    for (const auto variant : variants) {
      if (variant == InferenceVariant::full) continue;
      if (variant == InferenceVariant::persona_redacted &&
          !persona_applicable(label.condition))
        continue;
      const std::string id = trial_id;
      tasks.emplace_back([&, id, variant] {
        try {
          Transcript full = load_transcript(paths.transcript_file(id));
          materialize_variant(paths, id, variant, full, packs, provider);
          std::lock_guard<std::mutex> lock(mutex);
          ++result.records_per_variant[to_string(variant)];
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mutex);
          result.warnings.push_back(id + "/" + to_string(variant) + ": " + e.what());
        }
      });
    }
  }
  run_parallel(tasks, config.concurrency);
  return result;
}

InferencePassResult run_inference_pass(const fs::path& run_dir,
                                       const std::vector<InferenceVariant>& variants,
                                       const RunConfig& config, BackendProvider& provider) {
  const PackSet packs = config.load_pack_set();
  RunPaths paths{run_dir};
  fs::create_directories(paths.inference_dir());
  LoadedRun run = load_completed(paths);

  InferencePassResult result;
  for (const auto& variant : variants) result.records_per_variant[to_string(variant)] = 0;

  // Trials the manifest knows but whose transcripts are gone get a warning.
  for (const auto& [trial_id, record] : run.manifest.trials) {
    if (record.status == TrialStatus::complete &&
        !fs::exists(paths.transcript_file(trial_id)))
      result.warnings.push_back(trial_id + ": transcript missing, skipped");
  }

  std::mutex mutex;
  std::vector<std::function<void()>> tasks;
  for (const auto& [trial_id_str, label_ref] : run.labels) {
    if (!fs::exists(paths.transcript_file(trial_id_str))) continue;
    for (const auto variant : variants) {
      if (variant == InferenceVariant::persona_redacted &&
          !persona_applicable(label_ref.condition)) {
        continue;
      }
      const std::string id = trial_id_str;
      tasks.emplace_back([&, id, variant] {
        const fs::path record_file = paths.inference_file(id, variant);
        if (fs::exists(record_file)) {  // resume: keep the existing record
          std::lock_guard<std::mutex> lock(mutex);
          ++result.records_per_variant[to_string(variant)];
          return;
        }
        try {
          Transcript full = load_transcript(paths.transcript_file(id));
          Transcript input = materialize_variant(paths, id, variant, full, packs, provider);
          auto backend = provider.inference(id, variant);
          InferenceOptions options;
          options.retry = retry_policy_from(config.backend);
          options.sanity_ceiling_dollars = config.sanity_ceiling_dollars;
          InferenceReport report = infer_wtp(input, variant, *backend, options);
          write_file_atomic(record_file, inference_report_to_json(report));
          std::lock_guard<std::mutex> lock(mutex);
          ++result.records_per_variant[to_string(variant)];
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mutex);
          result.warnings.push_back(id + "/" + to_string(variant) + ": lost (" + e.what() +
                                    ")");
        }
      });
    }
  }
  run_parallel(tasks, config.concurrency);
  return result;
}

// --- metrics and reports -----------------------------------------------------

std::vector<stats::MetricsReport> compute_metrics(const fs::path& run_dir,
                                                  const RunConfig& config) {
  RunPaths paths{run_dir};
  LoadedRun run = load_completed(paths);
  if (!fs::exists(paths.inference_dir()))
    throw DataError("no inference records in run dir: " + run_dir.string());

  // (condition, variant) -> cell -> estimates; factorial slices also keyed by
  // (variant, scaffold) for the design-aware statistics.
  struct GroupData {
    std::map<std::string, stats::CellEstimates> cells;
    std::map<std::string, stats::FactorialCell> factorial;
    bool has_non_baseline = false;
  };
  std::map<std::pair<std::string, std::string>, GroupData> groups;

  for (const auto& [trial_id, label] : run.labels) {
    for (const auto variant :
         {InferenceVariant::full, InferenceVariant::dollar_redacted,
          InferenceVariant::persona_redacted}) {
      const fs::path file = paths.inference_file(trial_id, variant);
      if (!fs::exists(file)) continue;
      InferenceReport report = inference_report_from_json(read_file(file));
      const double estimate = static_cast<double>(report.estimate);
      const double target = dollars(label.target_wtp);

      auto& group = groups[{to_string(label.condition), to_string(variant)}];
      auto& cell = group.cells[label.cell_id];
      cell.cell_id = label.cell_id;
      cell.target = target;
      cell.estimates.push_back(estimate);

      if (label.condition == Condition::verbal) {
        // Factorial cells are keyed by target so all variants of one tier
        // aggregate into the same row.
        const std::string tier_key = "t" + std::to_string(static_cast<int>(target));
        auto& fcell = group.factorial[tier_key];
        fcell.cell_id = label.cell_id;
        fcell.target = target;
        const std::size_t v = static_cast<std::size_t>(label.variant - 1);
        const std::size_t s = label.scaffold == Scaffold::A ? 0 : 1;
        if (v < 3) fcell.estimates[v][s].push_back(estimate);
        if (label.variant != 1 || label.scaffold != Scaffold::A)
          group.has_non_baseline = true;
      }
    }
  }

  std::vector<stats::MetricsReport> reports;
  for (auto& [key, group] : groups) {
    const auto& [condition, variant] = key;
    std::vector<stats::CellEstimates> cells;
    for (auto& [cell_id, data] : group.cells) cells.push_back(std::move(data));

    std::uint64_t cell_hash = 1469598103934665603ULL;
    for (char c : condition + "/" + variant) {
      cell_hash ^= static_cast<unsigned char>(c);
      cell_hash *= 1099511628211ULL;
    }
    const std::uint64_t seed = mix_seed(config.master_seed, cell_hash);

    stats::MetricsReport report =
        stats::build_metrics(condition, variant, cells, config.bootstrap_resamples, seed);

    if (group.has_non_baseline) {
      std::vector<stats::FactorialCell> fcells;
      bool complete = !group.factorial.empty();
      for (auto& [tier, fcell] : group.factorial) {
        for (std::size_t v = 0; v < 3 && complete; ++v)
          for (std::size_t s = 0; s < 2; ++s)
            if (fcell.estimates[v][s].empty()) complete = false;
        fcells.push_back(std::move(fcell));
      }
      if (complete) {
        std::sort(fcells.begin(), fcells.end(),
                  [](const auto& a, const auto& b) { return a.target < b.target; });
        report.slope =
            stats::design_aware_bootstrap(fcells, config.bootstrap_resamples, seed);
        report.decomposition = stats::variance_decomposition(fcells);
      }
    }
    reports.push_back(std::move(report));
  }
  if (reports.empty()) throw DataError("no inference records found to report on");
  return reports;
}

ReportResult report(const fs::path& run_dir, const RunConfig& config) {
  RunPaths paths{run_dir};
  fs::create_directories(paths.reports_dir());
  std::vector<stats::MetricsReport> metrics = compute_metrics(run_dir, config);

  ReportResult result;
  auto emit = [&](const fs::path& file, const std::string& content) {
    write_file_atomic(file, content);
    result.files.push_back(file);
  };

  for (const auto& m : metrics) {
    const std::string stem = m.condition + "_" + m.variant;
    emit(paths.reports_dir() / ("metrics_" + stem + ".json"), stats::metrics_to_json(m));
    emit(paths.reports_dir() / ("cells_" + stem + ".csv"), stats::cells_csv(m));
    emit(paths.reports_dir() / ("plot_" + stem + ".csv"), stats::plot_csv(m));
    if (!m.decomposition.empty())
      emit(paths.reports_dir() / ("decomposition_" + stem + ".csv"),
           stats::decomposition_csv(m.decomposition));

    char line[256];
    std::snprintf(line, sizeof(line),
                  "%-10s %-16s slope %.2f [%.2f, %.2f]  spearman %.4f  mae $%.0f  n %d",
                  m.condition.c_str(), m.variant.c_str(), m.slope.slope, m.slope.ci_low,
                  m.slope.ci_high, m.spearman, m.aggregate_mae, m.n_total);
    result.summary_lines.push_back(line);
  }

  auto find = [&](const std::string& condition,
                  const std::string& variant) -> const stats::MetricsReport* {
    for (const auto& m : metrics)
      if (m.condition == condition && m.variant == variant) return &m;
    return nullptr;
  };
  for (const char* variant : {"full", "dollar_redacted"}) {
    const auto* verbal = find("verbal", variant);
    const auto* numeric = find("numeric", variant);
    if (verbal && numeric) {
      auto cmp = stats::compare_conditions(*numeric, *verbal);
      emit(paths.reports_dir() / (std::string("comparison_") + variant + ".csv"),
           stats::comparison_csv(cmp));
    }
  }
  return result;
}

// --- top-up -------------------------------------------------------------------

TopUpResult top_up(const fs::path& run_dir, const RunConfig& config) {
  RunPaths paths{run_dir};
  if (!fs::exists(paths.plan_file()) || !fs::exists(paths.manifest_file()))
    throw DataError("top-up requires an existing run with plan and manifest");

  ExperimentPlan plan = plan_from_json(read_file(paths.plan_file()));
  RunManifest manifest = manifest_from_json(read_file(paths.manifest_file()));
  if (manifest.plan_digest != plan_digest(plan))
    throw DataError("refusing to mix runs: manifest does not match plan");

  // Highest trial number per combo, then one fresh trial per lost one.
  std::map<std::string, const PlannedTrial*> by_id;
  std::map<std::string, int> max_trial;
  auto combo_key = [](const PlannedTrial& t) {
    return to_string(t.condition) + "/" + t.cell_id + "/v" + std::to_string(t.variant) +
           "/s" + to_string(t.scaffold);
  };
  for (const auto& trial : plan.trials) {
    by_id[trial_id_for(trial)] = &trial;
    auto key = combo_key(trial);
    max_trial[key] = std::max(max_trial[key], trial.trial_number);
  }

  std::vector<PlannedTrial> appended;
  for (const auto& [trial_id, record] : manifest.trials) {
    if (record.status != TrialStatus::lost) continue;
    auto it = by_id.find(trial_id);
    if (it == by_id.end()) continue;
    PlannedTrial fresh = *it->second;
    fresh.trial_number = ++max_trial[combo_key(fresh)];
    fresh.seed = trial_seed(plan.master_seed, fresh);
    appended.push_back(fresh);
  }

  TopUpResult result;
  if (appended.empty()) return result;

  for (const auto& trial : appended) {
    plan.trials.push_back(trial);
    manifest.trials.emplace_back(trial_id_for(trial), TrialRecord{});
    result.new_trial_ids.push_back(trial_id_for(trial));
  }
  result.appended = static_cast<int>(appended.size());
  manifest.plan_digest = plan_digest(plan);
  write_file_atomic(paths.plan_file(), plan_to_json(plan));
  write_file_atomic(paths.manifest_file(), manifest_to_json(manifest));
  return result;
}

// --- isolation scan -------------------------------------------------------------

std::vector<IsolationViolation> scan_isolation(const fs::path& run_dir, const PackSet& packs) {
  RunPaths paths{run_dir};
  LoadedRun run = load_completed(paths);

  std::vector<IsolationViolation> violations;
  const std::string prompt = render_inference_prompt();

  for (const auto& [trial_id, label] : run.labels) {
    const std::string transcript_text = read_file(paths.transcript_file(trial_id));
    const std::string assembled = prompt + "\n\n" + transcript_text;

    auto flag = [&](const std::string& what, const std::string& needle) {
      if (!needle.empty() && assembled.find(needle) != std::string::npos)
        violations.push_back({trial_id, what + " value '" + needle + "' in inference input"});
    };
    flag("trial_id", label.trial_id);
    flag("cell_id", label.cell_id);
    if (label.profile_id && *label.profile_id != label.cell_id)
      flag("profile_id", *label.profile_id);
    flag("target_wtp", std::to_string(label.target_wtp));
    flag("seed", std::to_string(label.seed));
    for (const char* field :
         {"target_wtp", "trial_id", "cell_id", "profile_id", "trial_number",
          "master_seed", "scaffold"}) {
      if (assembled.find(field) != std::string::npos)
        violations.push_back({trial_id, std::string("label field name '") + field +
                                            "' in inference input"});
    }

    // Catalog text may appear only where the dialogue itself carried it.
    for (const auto& product : packs.catalog) {
      for (const std::string& snippet :
           {product.name(), product.description, product.tier}) {
        if (assembled.find(snippet) != std::string::npos &&
            transcript_text.find(snippet) == std::string::npos) {
          violations.push_back(
              {trial_id, "catalog text '" + snippet + "' not from dialogue"});
        }
      }
    }
  }
  return violations;
}

}  // namespace wtpleak
