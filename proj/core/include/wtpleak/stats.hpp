#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace wtpleak::stats {

// Per-cell row shape shared by every results table. Estimates and targets are
// whole-ish dollars as doubles.
struct CellSummary {
  std::string cell_id;
  double target = 0;
  double mean_estimate = 0;
  double mae = 0;
  int within_25_count = 0;
  int n = 0;
  bool operator==(const CellSummary&) const = default;
};

enum class BootstrapMode { cell_stratified, design_aware };

std::string to_string(BootstrapMode m);

struct SlopeResult {
  double slope = 0;
  double ci_low = 0;
  double ci_high = 0;
  int n_resamples = 0;
  std::uint64_t seed = 0;
  BootstrapMode mode = BootstrapMode::cell_stratified;
  bool operator==(const SlopeResult&) const = default;
};

struct CellEstimates {
  std::string cell_id;
  double target = 0;
  std::vector<double> estimates;
};

// Mean, MAE against target, within-25% count (inclusive window
// |est - target| <= 0.25 * target), and n per cell. Lost trials never reach
// this function; every named cell must have at least one estimate.
std::vector<CellSummary> summarize_cells(
    const std::vector<std::pair<std::string, double>>& estimates,
    const std::map<std::string, double>& targets);

// Simple OLS slope of mean estimate on target. Needs >= 2 distinct targets.
double ols_slope(const std::vector<std::pair<double, double>>& points);

// Spearman rank correlation with average-rank tie handling.
double spearman_rho(const std::vector<std::pair<double, double>>& points);

// Cell-stratified bootstrap: each resample redraws every cell's estimates with
// replacement, recomputes cell means, and refits the slope; the CI is the
// 2.5/97.5 percentile band. The stream for resample i of cell c derives from
// (seed, i, c), so results do not depend on cell iteration order.
SlopeResult bootstrap_slope(const std::vector<CellEstimates>& cells, int n_resamples = 2000,
                            std::uint64_t seed = 0);

struct CellMeanCI {
  std::string cell_id;
  double target = 0;
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
};

// Percentile CIs of the per-cell means from the same resampling scheme as
// bootstrap_slope; feeds the plot-data files.
std::vector<CellMeanCI> bootstrap_cell_means(const std::vector<CellEstimates>& cells,
                                             int n_resamples = 2000, std::uint64_t seed = 0);

// One target cell of a full 3 variants x 2 scaffolds design.
struct FactorialCell {
  std::string cell_id;
  double target = 0;
  // estimates[variant-1][scaffold] with scaffold A = 0, B = 1
  std::array<std::array<std::vector<double>, 2>, 3> estimates;

  int total_n() const;
};

// Design-aware bootstrap: each resample draws 3 variants and 2 scaffolds with
// replacement, then redraws trials within each selected (cell, variant,
// scaffold) cell, collapses to cell means across the drawn design, and refits
// the slope.
SlopeResult design_aware_bootstrap(const std::vector<FactorialCell>& cells,
                                   int n_resamples = 2000, std::uint64_t seed = 0);

struct VarianceDecomposition {
  std::string cell_id;
  double target = 0;
  int n = 0;
  double sd_6_combos = 0;
  double sd_3_variants = 0;
  double sd_2_scaffolds = 0;
};

// Per target cell: sample SD (n-1) of the six (variant, scaffold) combo means,
// of the three variant-marginal means, and of the two scaffold-marginal means.
std::vector<VarianceDecomposition> variance_decomposition(
    const std::vector<FactorialCell>& cells);

// Everything reported for one (condition, variant) slice.
struct MetricsReport {
  std::string condition;
  std::string variant;
  std::vector<CellSummary> cells;  // ascending target
  SlopeResult slope;
  double spearman = 0;
  double aggregate_mae = 0;
  int aggregate_within_25 = 0;
  int n_total = 0;
  double trial_level_slope = 0;  // secondary diagnostic only
  std::vector<CellMeanCI> cell_cis;
  std::vector<VarianceDecomposition> decomposition;  // factorial data only
};

// Cell summaries + slope + bootstrap + Spearman in one pass.
MetricsReport build_metrics(const std::string& condition, const std::string& variant,
                            const std::vector<CellEstimates>& cells, int n_resamples = 2000,
                            std::uint64_t seed = 0);

struct ComparisonRow {
  std::string quantity;
  std::string left;
  std::string right;
  double delta = 0;
  bool cis_overlap = false;      // meaningful only when has_cis
  bool has_cis = false;
};

struct ConditionComparison {
  std::string left_label;
  std::string right_label;
  std::vector<ComparisonRow> rows;
};

// Side-by-side MAE, within-25%, slope with CI, cell-mean range, and Spearman.
// Throws when the two reports disagree on the target grid.
ConditionComparison compare_conditions(const MetricsReport& a, const MetricsReport& b);

std::string metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const std::string& json_text);
std::string cells_csv(const MetricsReport& report);
std::string plot_csv(const MetricsReport& report);
std::string comparison_csv(const ConditionComparison& comparison);
std::string decomposition_csv(const std::vector<VarianceDecomposition>& rows);

}  // namespace wtpleak::stats
