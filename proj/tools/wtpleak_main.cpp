#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wtpleak/errors.hpp"
#include "wtpleak/fsutil.hpp"
#include "wtpleak/harness.hpp"
#include "wtpleak/packs.hpp"
#include "wtpleak/plan.hpp"
#include "wtpleak/redaction.hpp"

namespace fs = std::filesystem;
using namespace wtpleak;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;
constexpr int kExitData = 4;

struct CommonOptions {
  std::optional<std::string> config_file;
  std::optional<std::string> run_dir;
  std::optional<std::string> design;
  std::optional<int> trials_per_cell;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::string> backend_kind;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<int> concurrency;
  std::optional<int> resamples;
  std::optional<std::string> packs_dir;
  std::vector<std::string> variants;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_file, "Run config JSON file");
  cmd->add_option("--run-dir", opts.run_dir, "Run directory");
  cmd->add_option("--design", opts.design, "main | factorial | stripped");
  cmd->add_option("--trials-per-cell,-n", opts.trials_per_cell, "Trials per cell");
  cmd->add_option("--seed", opts.master_seed, "Master seed");
  cmd->add_option("--backend", opts.backend_kind, "scripted | remote");
  cmd->add_option("--endpoint", opts.endpoint, "Remote endpoint URL");
  cmd->add_option("--model", opts.model, "Remote model name");
  cmd->add_option("--concurrency", opts.concurrency, "In-flight backend call bound");
  cmd->add_option("--resamples", opts.resamples, "Bootstrap resample count");
  cmd->add_option("--packs-dir", opts.packs_dir, "Data-pack directory override");
  cmd->add_option("--variants", opts.variants,
                  "Inference variants (full, dollar_redacted, persona_redacted)");
}

// Config file first, then CLI flags on top.
RunConfig resolve_config(const CommonOptions& opts) {
  RunConfig config;
  if (opts.config_file) config = load_config_file(*opts.config_file);
  if (opts.run_dir) config.run_dir = *opts.run_dir;
  if (opts.design) config.design = design_from_string(*opts.design);
  if (opts.trials_per_cell) config.trials_per_cell = *opts.trials_per_cell;
  if (opts.master_seed) config.master_seed = *opts.master_seed;
  if (opts.backend_kind) config.backend.kind = *opts.backend_kind;
  if (opts.endpoint) config.backend.endpoint = *opts.endpoint;
  if (opts.model) config.backend.model = *opts.model;
  if (opts.concurrency) config.concurrency = *opts.concurrency;
  if (opts.resamples) config.bootstrap_resamples = *opts.resamples;
  if (opts.packs_dir) config.packs_dir = *opts.packs_dir;
  if (!opts.variants.empty()) {
    config.variants.clear();
    for (const auto& v : opts.variants) config.variants.push_back(variant_from_string(v));
  }
  if (config.trials_per_cell < 1) throw ValidationError("trials_per_cell must be >= 1");
  if (config.concurrency < 1) throw ValidationError("concurrency must be >= 1");
  return config;
}

// Reuse the stored plan on resume; build (and store) it on first contact.
ExperimentPlan plan_for_run(const RunConfig& config) {
  const fs::path plan_file = fs::path(config.run_dir) / "plan.json";
  if (fs::exists(plan_file)) return plan_from_json(read_file(plan_file));
  return build_plan(config.design, config.trials_per_cell, config.master_seed,
                    config.load_pack_set());
}

void print_pass_result(const char* what, const InferencePassResult& result) {
  for (const auto& [variant, count] : result.records_per_variant)
    std::printf("%s %s: %d records\n", what, variant.c_str(), count);
  for (const auto& warning : result.warnings)
    std::printf("warning: %s\n", warning.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-mediated shopping leakage harness"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto* cmd_plan = app.add_subcommand("plan", "Build the experiment plan and print counts");
  add_common(cmd_plan, opts);
  std::string plan_out;
  cmd_plan->add_option("--out", plan_out, "Write the plan JSON to this file");

  auto* cmd_run = app.add_subcommand("run", "Execute dialogues (idempotent resume)");
  add_common(cmd_run, opts);

  auto* cmd_redact = app.add_subcommand("redact", "Materialize redacted transcript variants");
  add_common(cmd_redact, opts);

  auto* cmd_infer = app.add_subcommand("infer", "Run inference over completed trials");
  add_common(cmd_infer, opts);

  auto* cmd_stats = app.add_subcommand("stats", "Compute metrics and write JSON records");
  add_common(cmd_stats, opts);

  auto* cmd_report = app.add_subcommand("report", "Emit CSV tables and plot data");
  add_common(cmd_report, opts);

  auto* cmd_topup = app.add_subcommand("top-up", "Append fresh trials for lost ones");
  add_common(cmd_topup, opts);

  auto* cmd_packs = app.add_subcommand("packs", "Export or validate the built-in data packs");
  std::string packs_export_dir;
  bool packs_validate = false;
  cmd_packs->add_option("--export", packs_export_dir, "Write pack files to this directory");
  cmd_packs->add_flag("--validate", packs_validate, "Validate packs and exit");
  cmd_packs->add_option("--packs-dir", opts.packs_dir, "Pack directory to validate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_packs->parsed()) {
      const PackSet packs = opts.packs_dir ? load_packs(*opts.packs_dir) : builtin_packs();
      if (!packs_export_dir.empty()) {
        save_packs(packs, packs_export_dir);
        std::printf("packs written to %s\n", packs_export_dir.c_str());
      }
      if (packs_validate || packs_export_dir.empty()) {
        packs.validate();
        std::printf("packs ok: %zu products, %zu profiles, %zu stripped, %zu numeric cells\n",
                    packs.catalog.size(), packs.profiles.size(),
                    packs.stripped_profiles.size(), packs.numeric_cells.size());
      }
      return 0;
    }

    RunConfig config = resolve_config(opts);

    if (cmd_plan->parsed()) {
      ExperimentPlan plan = build_plan(config.design, config.trials_per_cell,
                                       config.master_seed, config.load_pack_set());
      std::printf("plan %s: %zu trials (seed %llu, digest %s)\n", plan.name.c_str(),
                  plan.trials.size(), static_cast<unsigned long long>(plan.master_seed),
                  plan_digest(plan).c_str());
      if (!plan_out.empty()) {
        write_file_atomic(plan_out, plan_to_json(plan));
        std::printf("written to %s\n", plan_out.c_str());
      }
      return 0;
    }

    if (cmd_run->parsed()) {
      const PackSet packs = config.load_pack_set();
      ExperimentPlan plan = plan_for_run(config);
      auto provider = make_backend_provider(config, packs);
      RunManifest manifest = execute(plan, config, *provider);
      std::printf("run %s: %d complete, %d lost, %d pending\n", manifest.run_id.c_str(),
                  manifest.count(TrialStatus::complete), manifest.count(TrialStatus::lost),
                  manifest.count(TrialStatus::pending));
      return 0;
    }

    if (cmd_redact->parsed()) {
      const PackSet packs = config.load_pack_set();
      auto provider = make_backend_provider(config, packs);
      auto result = run_redaction_pass(config.run_dir, config.variants, config, *provider);
      print_pass_result("redacted", result);
      return 0;
    }

    if (cmd_infer->parsed()) {
      const PackSet packs = config.load_pack_set();
      auto provider = make_backend_provider(config, packs);
      auto result = run_inference_pass(config.run_dir, config.variants, config, *provider);
      print_pass_result("inference", result);
      return 0;
    }

    if (cmd_stats->parsed()) {
      auto metrics = compute_metrics(config.run_dir, config);
      const fs::path dir = fs::path(config.run_dir) / "reports";
      fs::create_directories(dir);
      for (const auto& m : metrics) {
        const fs::path file = dir / ("metrics_" + m.condition + "_" + m.variant + ".json");
        write_file_atomic(file, stats::metrics_to_json(m));
        std::printf("%-10s %-16s slope %.2f [%.2f, %.2f]  spearman %.4f  n %d -> %s\n",
                    m.condition.c_str(), m.variant.c_str(), m.slope.slope, m.slope.ci_low,
                    m.slope.ci_high, m.spearman, m.n_total, file.c_str());
      }
      return 0;
    }

    if (cmd_report->parsed()) {
      auto result = report(config.run_dir, config);
      for (const auto& line : result.summary_lines) std::printf("%s\n", line.c_str());
      for (const auto& file : result.files) std::printf("wrote %s\n", file.c_str());
      return 0;
    }

    if (cmd_topup->parsed()) {
      auto result = top_up(config.run_dir, config);
      std::printf("top-up: %d trials appended\n", result.appended);
      for (const auto& id : result.new_trial_ids) std::printf("  %s\n", id.c_str());
      return 0;
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const BackendError& e) {
    std::fprintf(stderr, "backend error: %s\n", e.what());
    return kExitBackend;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
