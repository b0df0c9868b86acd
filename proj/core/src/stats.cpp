#include "wtpleak/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "wtpleak/errors.hpp"
#include "wtpleak/rng.hpp"

namespace wtpleak::stats {

using nlohmann::json;

std::string to_string(BootstrapMode m) {
  return m == BootstrapMode::cell_stratified ? "cell_stratified" : "design_aware";
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Percentile with linear interpolation over the sorted sample.
double percentile(std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  double h = p * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

void require_distinct_targets(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ValidationError("slope needs at least 2 points");
  std::set<double> targets;
  for (const auto& [x, y] : points) targets.insert(x);
  if (targets.size() < 2)
    throw ValidationError("degenerate design: all targets equal, slope undefined");
}

}  // namespace

std::vector<CellSummary> summarize_cells(
    const std::vector<std::pair<std::string, double>>& estimates,
    const std::map<std::string, double>& targets) {
  std::map<std::string, std::vector<double>> by_cell;
  for (const auto& [cell, estimate] : estimates) by_cell[cell].push_back(estimate);

  std::vector<CellSummary> out;
  for (const auto& [cell, target] : targets) {
    auto it = by_cell.find(cell);
    if (it == by_cell.end() || it->second.empty())
      throw ValidationError("cell '" + cell + "' has no estimates");
    const auto& xs = it->second;
    CellSummary s;
    s.cell_id = cell;
    s.target = target;
    s.n = static_cast<int>(xs.size());
    s.mean_estimate = mean_of(xs);
    double abs_err = 0.0;
    for (double x : xs) {
      abs_err += std::fabs(x - target);
      if (std::fabs(x - target) <= 0.25 * target) ++s.within_25_count;
    }
    s.mae = abs_err / static_cast<double>(xs.size());
    out.push_back(std::move(s));
  }
  for (const auto& [cell, xs] : by_cell) {
    if (!targets.count(cell)) throw ValidationError("no target for cell '" + cell + "'");
  }
  std::sort(out.begin(), out.end(),
            [](const CellSummary& a, const CellSummary& b) { return a.target < b.target; });
  return out;
}

double ols_slope(const std::vector<std::pair<double, double>>& points) {
  require_distinct_targets(points);
  double mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ValidationError("spearman needs at least 2 points");
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& [x, y] : points) {
    xs.push_back(x);
    ys.push_back(y);
  }
  auto rx = average_ranks(xs);
  auto ry = average_ranks(ys);
  double mx = mean_of(rx), my = mean_of(ry);
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0)
    throw ValidationError("spearman undefined: a variable has constant rank");
  return num / std::sqrt(dx * dy);
}

namespace {

void require_cells(const std::vector<CellEstimates>& cells) {
  if (cells.size() < 2) throw ValidationError("bootstrap needs at least 2 cells");
  for (const auto& c : cells) {
    if (c.estimates.empty())
      throw ValidationError("cell '" + c.cell_id + "' has no estimates");
  }
}

double resampled_cell_mean(const CellEstimates& cell, Rng& rng) {
  const auto& xs = cell.estimates;
  double sum = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k)
    sum += xs[rng.below(xs.size())];
  return sum / static_cast<double>(xs.size());
}

}  // namespace

SlopeResult bootstrap_slope(const std::vector<CellEstimates>& cells, int n_resamples,
                            std::uint64_t seed) {
  require_cells(cells);
  if (n_resamples < 1) throw ValidationError("n_resamples must be at least 1");

  std::vector<std::pair<double, double>> observed;
  for (const auto& c : cells) observed.emplace_back(c.target, mean_of(c.estimates));

  SlopeResult result;
  result.slope = ols_slope(observed);
  result.n_resamples = n_resamples;
  result.seed = seed;
  result.mode = BootstrapMode::cell_stratified;

  std::vector<double> slopes(static_cast<std::size_t>(n_resamples));
  std::vector<std::pair<double, double>> points(cells.size());
  for (int i = 0; i < n_resamples; ++i) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i), c));
      points[c] = {cells[c].target, resampled_cell_mean(cells[c], rng)};
    }
    slopes[static_cast<std::size_t>(i)] = ols_slope(points);
  }
  std::sort(slopes.begin(), slopes.end());
  result.ci_low = percentile(slopes, 0.025);
  result.ci_high = percentile(slopes, 0.975);
  return result;
}

std::vector<CellMeanCI> bootstrap_cell_means(const std::vector<CellEstimates>& cells,
                                             int n_resamples, std::uint64_t seed) {
  require_cells(cells);
  std::vector<CellMeanCI> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> means(static_cast<std::size_t>(n_resamples));
    for (int i = 0; i < n_resamples; ++i) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i), c));
      means[static_cast<std::size_t>(i)] = resampled_cell_mean(cells[c], rng);
    }
    std::sort(means.begin(), means.end());
    CellMeanCI ci;
    ci.cell_id = cells[c].cell_id;
    ci.target = cells[c].target;
    ci.mean = mean_of(cells[c].estimates);
    ci.ci_low = percentile(means, 0.025);
    ci.ci_high = percentile(means, 0.975);
    out.push_back(std::move(ci));
  }
  return out;
}

int FactorialCell::total_n() const {
  int n = 0;
  for (const auto& by_scaffold : estimates)
    for (const auto& xs : by_scaffold) n += static_cast<int>(xs.size());
  return n;
}

namespace {

void require_factorial(const std::vector<FactorialCell>& cells) {
  if (cells.size() < 2) throw ValidationError("design-aware bootstrap needs >= 2 cells");
  for (const auto& c : cells) {
    for (std::size_t v = 0; v < 3; ++v) {
      for (std::size_t s = 0; s < 2; ++s) {
        if (c.estimates[v][s].empty())
          throw ValidationError("factorial cell '" + c.cell_id + "' missing variant " +
                                std::to_string(v + 1) + " scaffold " +
                                (s == 0 ? std::string("A") : std::string("B")));
      }
    }
  }
}

}  // namespace

SlopeResult design_aware_bootstrap(const std::vector<FactorialCell>& cells, int n_resamples,
                                   std::uint64_t seed) {
  require_factorial(cells);
  if (n_resamples < 1) throw ValidationError("n_resamples must be at least 1");

  std::vector<std::pair<double, double>> observed;
  for (const auto& c : cells) {
    double sum = 0;
    int n = 0;
    for (const auto& by_scaffold : c.estimates) {
      for (const auto& xs : by_scaffold) {
        sum = std::accumulate(xs.begin(), xs.end(), sum);
        n += static_cast<int>(xs.size());
      }
    }
    observed.emplace_back(c.target, sum / n);
  }

  SlopeResult result;
  result.slope = ols_slope(observed);
  result.n_resamples = n_resamples;
  result.seed = seed;
  result.mode = BootstrapMode::design_aware;

  // Stream layout: the design draw for resample i uses cell index SIZE_MAX;
  // per-cell redraws use the cell's index, as in the trial-only bootstrap.
  std::vector<double> slopes(static_cast<std::size_t>(n_resamples));
  std::vector<std::pair<double, double>> points(cells.size());
  for (int i = 0; i < n_resamples; ++i) {
    Rng design_rng(mix_seed(seed, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(-1)));
    std::array<std::size_t, 3> variants{};
    std::array<std::size_t, 2> scaffolds{};
    for (auto& v : variants) v = design_rng.below(3);
    for (auto& s : scaffolds) s = design_rng.below(2);

    for (std::size_t c = 0; c < cells.size(); ++c) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i), c));
      double sum = 0.0;
      int n = 0;
      for (std::size_t v : variants) {
        for (std::size_t s : scaffolds) {
          const auto& xs = cells[c].estimates[v][s];
          for (std::size_t k = 0; k < xs.size(); ++k) sum += xs[rng.below(xs.size())];
          n += static_cast<int>(xs.size());
        }
      }
      points[c] = {cells[c].target, sum / n};
    }
    slopes[static_cast<std::size_t>(i)] = ols_slope(points);
  }
  std::sort(slopes.begin(), slopes.end());
  result.ci_low = percentile(slopes, 0.025);
  result.ci_high = percentile(slopes, 0.975);
  return result;
}

std::vector<VarianceDecomposition> variance_decomposition(
    const std::vector<FactorialCell>& cells) {
  require_factorial(cells);
  std::vector<VarianceDecomposition> out;
  for (const auto& c : cells) {
    std::array<std::array<double, 2>, 3> combo_means{};
    for (std::size_t v = 0; v < 3; ++v)
      for (std::size_t s = 0; s < 2; ++s) combo_means[v][s] = mean_of(c.estimates[v][s]);

    std::vector<double> six;
    for (std::size_t v = 0; v < 3; ++v)
      for (std::size_t s = 0; s < 2; ++s) six.push_back(combo_means[v][s]);

    std::vector<double> variant_marginals;
    for (std::size_t v = 0; v < 3; ++v)
      variant_marginals.push_back((combo_means[v][0] + combo_means[v][1]) / 2.0);

    std::vector<double> scaffold_marginals;
    for (std::size_t s = 0; s < 2; ++s)
      scaffold_marginals.push_back(
          (combo_means[0][s] + combo_means[1][s] + combo_means[2][s]) / 3.0);

    VarianceDecomposition d;
    d.cell_id = c.cell_id;
    d.target = c.target;
    d.n = c.total_n();
    d.sd_6_combos = sample_sd(six);
    d.sd_3_variants = sample_sd(variant_marginals);
    d.sd_2_scaffolds = sample_sd(scaffold_marginals);
    out.push_back(std::move(d));
  }
  return out;
}

MetricsReport build_metrics(const std::string& condition, const std::string& variant,
                            const std::vector<CellEstimates>& cells, int n_resamples,
                            std::uint64_t seed) {
  require_cells(cells);
  std::vector<CellEstimates> ordered = cells;
  std::sort(ordered.begin(), ordered.end(),
            [](const CellEstimates& a, const CellEstimates& b) { return a.target < b.target; });

  MetricsReport report;
  report.condition = condition;
  report.variant = variant;

  std::vector<std::pair<std::string, double>> flat;
  std::map<std::string, double> targets;
  std::vector<std::pair<double, double>> trial_points;
  for (const auto& c : ordered) {
    targets[c.cell_id] = c.target;
    for (double x : c.estimates) {
      flat.emplace_back(c.cell_id, x);
      trial_points.emplace_back(c.target, x);
    }
  }
  report.cells = summarize_cells(flat, targets);

  std::vector<std::pair<double, double>> cell_points;
  double total_abs_err = 0;
  for (const auto& s : report.cells) {
    cell_points.emplace_back(s.target, s.mean_estimate);
    report.aggregate_within_25 += s.within_25_count;
    report.n_total += s.n;
    total_abs_err += s.mae * s.n;
  }
  report.aggregate_mae = total_abs_err / report.n_total;
  report.slope = bootstrap_slope(ordered, n_resamples, seed);
  report.spearman = spearman_rho(cell_points);
  report.trial_level_slope = ols_slope(trial_points);
  report.cell_cis = bootstrap_cell_means(ordered, n_resamples, seed);
  return report;
}

namespace {

std::string fmt(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string fmt_slope_ci(const SlopeResult& s) {
  return fmt(s.slope) + " [" + fmt(s.ci_low) + ", " + fmt(s.ci_high) + "]";
}

}  // namespace

ConditionComparison compare_conditions(const MetricsReport& a, const MetricsReport& b) {
  if (a.cells.size() != b.cells.size())
    throw ValidationError("condition comparison requires the same target grid");
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (a.cells[i].target != b.cells[i].target)
      throw ValidationError("condition comparison requires the same target grid");
  }

  ConditionComparison cmp;
  cmp.left_label = a.condition + "/" + a.variant;
  cmp.right_label = b.condition + "/" + b.variant;

  auto pct = [](const MetricsReport& r) {
    return 100.0 * r.aggregate_within_25 / static_cast<double>(r.n_total);
  };

  cmp.rows.push_back({"aggregate_mae", fmt(a.aggregate_mae), fmt(b.aggregate_mae),
                      b.aggregate_mae - a.aggregate_mae, false, false});
  cmp.rows.push_back({"aggregate_within_25_pct", fmt(pct(a), 1), fmt(pct(b), 1),
                      pct(b) - pct(a), false, false});

  const bool overlap = a.slope.ci_low <= b.slope.ci_high && b.slope.ci_low <= a.slope.ci_high;
  cmp.rows.push_back({"slope", fmt_slope_ci(a.slope), fmt_slope_ci(b.slope),
                      b.slope.slope - a.slope.slope, overlap, true});

  auto range = [](const MetricsReport& r) {
    double lo = r.cells.front().mean_estimate, hi = lo;
    for (const auto& c : r.cells) {
      lo = std::min(lo, c.mean_estimate);
      hi = std::max(hi, c.mean_estimate);
    }
    return fmt(lo, 0) + " to " + fmt(hi, 0);
  };
  cmp.rows.push_back({"cell_mean_range", range(a), range(b), 0, false, false});
  cmp.rows.push_back({"spearman_rho", fmt(a.spearman, 4), fmt(b.spearman, 4),
                      b.spearman - a.spearman, false, false});
  return cmp;
}

std::string metrics_to_json(const MetricsReport& report) {
  json j;
  j["condition"] = report.condition;
  j["variant"] = report.variant;
  j["cells"] = json::array();
  for (const auto& c : report.cells) {
    j["cells"].push_back({{"cell_id", c.cell_id},
                          {"target", c.target},
                          {"mean_estimate", c.mean_estimate},
                          {"mae", c.mae},
                          {"within_25_count", c.within_25_count},
                          {"n", c.n}});
  }
  j["slope"] = {{"slope", report.slope.slope},       {"ci_low", report.slope.ci_low},
                {"ci_high", report.slope.ci_high},   {"n_resamples", report.slope.n_resamples},
                {"seed", report.slope.seed},         {"mode", to_string(report.slope.mode)}};
  j["spearman"] = report.spearman;
  j["aggregate_mae"] = report.aggregate_mae;
  j["aggregate_within_25"] = report.aggregate_within_25;
  j["n_total"] = report.n_total;
  j["trial_level_slope"] = report.trial_level_slope;
  j["cell_cis"] = json::array();
  for (const auto& c : report.cell_cis) {
    j["cell_cis"].push_back({{"cell_id", c.cell_id},
                             {"target", c.target},
                             {"mean", c.mean},
                             {"ci_low", c.ci_low},
                             {"ci_high", c.ci_high}});
  }
  if (!report.decomposition.empty()) {
    j["decomposition"] = json::array();
    for (const auto& d : report.decomposition) {
      j["decomposition"].push_back({{"cell_id", d.cell_id},
                                    {"target", d.target},
                                    {"n", d.n},
                                    {"sd_6_combos", d.sd_6_combos},
                                    {"sd_3_variants", d.sd_3_variants},
                                    {"sd_2_scaffolds", d.sd_2_scaffolds}});
    }
  }
  return j.dump(2) + "\n";
}

MetricsReport metrics_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw wtpleak::DataError(std::string("metrics file is not valid JSON: ") + e.what());
  }
  MetricsReport r;
  r.condition = j.at("condition").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  for (const auto& e : j.at("cells")) {
    CellSummary c;
    c.cell_id = e.at("cell_id").get<std::string>();
    c.target = e.at("target").get<double>();
    c.mean_estimate = e.at("mean_estimate").get<double>();
    c.mae = e.at("mae").get<double>();
    c.within_25_count = e.at("within_25_count").get<int>();
    c.n = e.at("n").get<int>();
    r.cells.push_back(std::move(c));
  }
  const auto& s = j.at("slope");
  r.slope.slope = s.at("slope").get<double>();
  r.slope.ci_low = s.at("ci_low").get<double>();
  r.slope.ci_high = s.at("ci_high").get<double>();
  r.slope.n_resamples = s.at("n_resamples").get<int>();
  r.slope.seed = s.at("seed").get<std::uint64_t>();
  r.slope.mode = s.at("mode").get<std::string>() == "design_aware"
                     ? BootstrapMode::design_aware
                     : BootstrapMode::cell_stratified;
  r.spearman = j.at("spearman").get<double>();
  r.aggregate_mae = j.at("aggregate_mae").get<double>();
  r.aggregate_within_25 = j.at("aggregate_within_25").get<int>();
  r.n_total = j.at("n_total").get<int>();
  r.trial_level_slope = j.value("trial_level_slope", 0.0);
  if (j.contains("cell_cis")) {
    for (const auto& e : j["cell_cis"]) {
      CellMeanCI c;
      c.cell_id = e.at("cell_id").get<std::string>();
      c.target = e.at("target").get<double>();
      c.mean = e.at("mean").get<double>();
      c.ci_low = e.at("ci_low").get<double>();
      c.ci_high = e.at("ci_high").get<double>();
      r.cell_cis.push_back(std::move(c));
    }
  }
  if (j.contains("decomposition")) {
    for (const auto& e : j["decomposition"]) {
      VarianceDecomposition d;
      d.cell_id = e.at("cell_id").get<std::string>();
      d.target = e.at("target").get<double>();
      d.n = e.at("n").get<int>();
      d.sd_6_combos = e.at("sd_6_combos").get<double>();
      d.sd_3_variants = e.at("sd_3_variants").get<double>();
      d.sd_2_scaffolds = e.at("sd_2_scaffolds").get<double>();
      r.decomposition.push_back(std::move(d));
    }
  }
  return r;
}

std::string cells_csv(const MetricsReport& report) {
  std::string out = "cell_id,target,mean_estimate,mae,within_25_count,n\n";
  for (const auto& c : report.cells) {
    out += c.cell_id + "," + fmt(c.target, 0) + "," + fmt(c.mean_estimate) + "," +
           fmt(c.mae) + "," + std::to_string(c.within_25_count) + "," + std::to_string(c.n) +
           "\n";
  }
  return out;
}

std::string plot_csv(const MetricsReport& report) {
  std::string out = "target,mean,ci_low,ci_high\n";
  for (const auto& c : report.cell_cis) {
    out += fmt(c.target, 0) + "," + fmt(c.mean, 4) + "," + fmt(c.ci_low, 4) + "," +
           fmt(c.ci_high, 4) + "\n";
  }
  return out;
}

std::string comparison_csv(const ConditionComparison& comparison) {
  std::string out = "quantity," + comparison.left_label + "," + comparison.right_label +
                    ",delta,cis_overlap\n";
  for (const auto& row : comparison.rows) {
    out += row.quantity + ",\"" + row.left + "\",\"" + row.right + "\"," + fmt(row.delta, 4) +
           "," + (row.has_cis ? (row.cis_overlap ? "yes" : "no") : "") + "\n";
  }
  return out;
}

std::string decomposition_csv(const std::vector<VarianceDecomposition>& rows) {
  std::string out = "cell_id,target,n,sd_6_combos,sd_3_variants,sd_2_scaffolds\n";
  for (const auto& d : rows) {
    out += d.cell_id + "," + fmt(d.target, 0) + "," + std::to_string(d.n) + "," +
           fmt(d.sd_6_combos, 4) + "," + fmt(d.sd_3_variants, 4) + "," +
           fmt(d.sd_2_scaffolds, 4) + "\n";
  }
  return out;
}

}  // namespace wtpleak::stats
