#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "agglo/cade.hpp"
#include "agglo/io_store.hpp"
#include "agglo/parallel.hpp"

namespace agglo {

inline constexpr const char* kToolVersion = "1.0.0";

/// A (p x gamma x seed) grid of synthetic runs.
struct ExperimentSpec {
  std::vector<double> p_values = {0.1, 0.2, 0.3, 0.4};
  std::vector<double> gamma_values = {0.0, 0.3, 0.6, 0.9};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int rho = 10;
  int box_size = 2400;
  PipelineOptions pipeline;
  double alpha = kDefaultAlpha;
  int workers = default_worker_count();
  // Euler-vs-radius curves are computed for the first seed of each cell.
  bool curves = true;
  std::vector<double> curve_radii = [] {
    std::vector<double> r;
    for (int i = 1; i <= 30; ++i) r.push_back(i);
    return r;
  }();
};

/// Cumulative CADE E(M; n a, 0) along the thickening of one run.
struct StepCurveRow {
  double p = 0.0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  int step = 0;
  std::int64_t chi = 0;
  std::int64_t cade_cumulative = 0;
};

/// Euler number of the center set dilated to radius r, with the measured
/// and Boolean-model normalized functionals at x = lambda pi r^2.
struct RadiusCurveRow {
  double p = 0.0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  double r = 0.0;
  std::int64_t chi = 0;
  double x = 0.0;
  double e = 0.0;
  double a = 0.0;
  double l = 0.0;
  double e_ref = 0.0;
};

struct ReportBundle {
  std::vector<RunRecord> runs;  // ordered by (p, gamma, seed)
  std::vector<CalibrationEntry> calibration;
  std::vector<SummaryCell> cade_summary;
  std::vector<SummaryCell> delta_summary;
  std::vector<SummaryCell> clark_evans_summary;
  std::vector<StepCurveRow> step_curves;
  std::vector<RadiusCurveRow> radius_curves;
  std::vector<std::string> failures;  // one message per failed cell
  std::vector<std::string> notes;

  bool ok() const { return failures.empty(); }
};

/// Progress hook: (completed runs, total runs, description of the last one).
using ProgressFn = std::function<void(std::size_t, std::size_t, const std::string&)>;

/// Runs every cell. Gamma = 0 cells double as the calibration set; if the
/// grid has no gamma = 0 column, standard patterns are generated with the
/// same seeds. Failed cells are reported in `failures`, never thrown.
ReportBundle run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});

/// Writes results.csv, calibration.csv, summary_{cade,delta,clark_evans}.csv,
/// curves_cade_steps.csv, curves_euler_radius.csv and appends to
/// manifest.jsonl under `dir`.
void write_report(const ReportBundle& bundle, const ExperimentSpec& spec,
                  const std::filesystem::path& dir);

/// avg/max/min of `metric` per (p, gamma) over the runs, in grid order.
std::vector<SummaryCell> summarize(const std::vector<RunRecord>& runs, const ExperimentSpec& spec,
                                   const std::function<double(const RunRecord&)>& metric);

}  // namespace agglo
