#include "agglo/cade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "agglo/genesis.hpp"
#include "agglo/parallel.hpp"
#include "agglo/raster.hpp"

namespace agglo {

CadeValue cade(const EulerTrace& trace, int n1, int n2) {
  const int last = static_cast<int>(trace.chis.size()) - 1;
  if (n1 < 0 || n1 >= n2 || n2 > last)
    throw std::invalid_argument("cade: need 0 <= n1 < n2 <= " + std::to_string(last) +
                                ", got n1=" + std::to_string(n1) + " n2=" + std::to_string(n2));
  CadeValue out;
  out.n1 = n1;
  out.n2 = n2;
  for (int i = n1 + 1; i <= n2; ++i) {
    const std::int64_t d = trace.chis[static_cast<std::size_t>(i)] -
                           trace.chis[static_cast<std::size_t>(i - 1)];
    out.value += d < 0 ? -d : d;
  }
  return out;
}

int thickening_steps(double rho, double pixel_size) {
  if (!(rho > 0.0) || !(pixel_size > 0.0))
    throw std::invalid_argument("thickening_steps: rho and pixel size must be positive");
  return static_cast<int>(std::lround(rho / pixel_size));
}

CadeValue image_cade(const BinaryImage& image, double rho, const PipelineOptions& options) {
  const int n2 = thickening_steps(rho, image.pixel_size());
  const ThickeningSchedule schedule = make_schedule(n2, options.variant, options.n1);
  const EulerTrace trace = thicken_trace(image, schedule, options.connectivity);
  return cade(trace, schedule.skip_prefix, schedule.length());
}

CalibrationEntry summarize_calibration(double p, int rho, int box_size,
                                       std::vector<std::uint64_t> seeds,
                                       std::vector<std::int64_t> cades) {
  if (cades.empty() || cades.size() != seeds.size())
    throw std::invalid_argument("calibration: need one CADE value per seed");
  CalibrationEntry e;
  e.p = p;
  e.rho = rho;
  e.box_size = box_size;
  e.seeds = std::move(seeds);
  e.cades = std::move(cades);
  const double n = static_cast<double>(e.cades.size());
  const double sum = std::accumulate(e.cades.begin(), e.cades.end(), 0.0);
  e.mean = sum / n;
  const auto [lo, hi] = std::minmax_element(e.cades.begin(), e.cades.end());
  e.min = static_cast<double>(*lo);
  e.max = static_cast<double>(*hi);
  if (e.cades.size() < 2) {
    e.stddev = std::numeric_limits<double>::quiet_NaN();
  } else {
    double ss = 0.0;
    for (std::int64_t c : e.cades) ss += (c - e.mean) * (c - e.mean);
    e.stddev = std::sqrt(ss / (n - 1.0));
  }
  return e;
}

CalibrationEntry calibrate(double p, int rho, int box_size, const std::vector<std::uint64_t>& seeds,
                           const PipelineOptions& options, int workers) {
  if (seeds.size() < 2) throw std::invalid_argument("calibrate: need at least two seeds");
  std::vector<std::int64_t> values(seeds.size());
  const auto errors = parallel_for(seeds.size(), workers, [&](std::size_t i) {
    GenerationParams params;
    params.gamma_agg = 0.0;
    params.target_p = p;
    params.rho = rho;
    params.box_size = box_size;
    params.seed = seeds[i];
    const Configuration config = generate_configuration(params);
    values[i] = image_cade(rasterize(config), rho, options).value;
  });
  rethrow_first(errors);
  return summarize_calibration(p, rho, box_size, seeds, std::move(values));
}

CalibrationTable::CalibrationTable(std::vector<CalibrationEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const CalibrationEntry& a, const CalibrationEntry& b) { return a.p < b.p; });
}

double CalibrationTable::e_hat(double p, double snap_tolerance) const {
  if (entries_.empty()) throw std::out_of_range("calibration table is empty");
  const CalibrationEntry* nearest = &entries_.front();
  for (const auto& e : entries_)
    if (std::abs(e.p - p) < std::abs(nearest->p - p)) nearest = &e;
  if (std::abs(nearest->p - p) <= snap_tolerance) return nearest->mean;

  auto upper = std::find_if(entries_.begin(), entries_.end(),
                            [p](const CalibrationEntry& e) { return e.p > p; });
  if (upper == entries_.begin() || upper == entries_.end())
    throw std::out_of_range("volume fraction " + std::to_string(p) +
                            " lies outside the calibration table [" +
                            std::to_string(entries_.front().p) + ", " +
                            std::to_string(entries_.back().p) + "]");
  const CalibrationEntry& hi = *upper;
  const CalibrationEntry& lo = *(upper - 1);
  const double t = (p - lo.p) / (hi.p - lo.p);
  return lo.mean + t * (hi.mean - lo.mean);
}

std::vector<double> default_calibration_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i * 0.05);
  return grid;
}

CalibrationTable build_calibration_table(const std::vector<double>& p_grid, int rho, int box_size,
                                         const std::vector<std::uint64_t>& seeds,
                                         const PipelineOptions& options, int workers) {
  std::vector<CalibrationEntry> entries;
  entries.reserve(p_grid.size());
  for (double p : p_grid) entries.push_back(calibrate(p, rho, box_size, seeds, options, workers));
  return CalibrationTable(std::move(entries));
}

AggIndex delta_agg(const CadeValue& value, double e_hat_p, double alpha) {
  if (!(e_hat_p > 0.0))
    throw std::domain_error(
        "delta_agg: standard-pattern mean is zero (volume fraction or window too small)");
  AggIndex out;
  out.alpha = alpha;
  out.e_hat_p = e_hat_p;
  out.cade = value.value;
  out.delta = alpha * (e_hat_p - static_cast<double>(value.value)) / e_hat_p;
  return out;
}

AggIndex delta_agg(const CadeValue& value, const CalibrationEntry& calibration, double alpha) {
  return delta_agg(value, calibration.mean, alpha);
}

AnalysisResult analyze_image(const BinaryImage& image, double rho,
                             const std::optional<CalibrationTable>& calibration,
                             const AnalysisOptions& options) {
  if (!(rho >= 2.0)) throw std::invalid_argument("analyze: rho must be at least 2");
  AnalysisResult result;
  result.volume_fraction = volume_fraction(image);
  if (result.volume_fraction <= 0.0)
    throw std::domain_error("analyze: image has no foreground (p = 0), delta is undefined");
  if (result.volume_fraction > 0.5)
    result.warnings.push_back("volume fraction " + std::to_string(result.volume_fraction) +
                              " exceeds 0.5, outside the validated regime");
  if (rho / image.pixel_size() < 3.0)
    result.warnings.push_back("rho / pixel size < 3: thickening schedule too short to be meaningful");

  result.cade = image_cade(image, rho, options.pipeline);

  double e_hat = 0.0;
  if (calibration) {
    e_hat = calibration->e_hat(result.volume_fraction);
  } else {
    if (image.width() != image.height())
      throw std::invalid_argument("analyze: on-demand calibration needs a square image");
    const int rho_px = thickening_steps(rho, image.pixel_size());
    e_hat = calibrate(result.volume_fraction, rho_px, image.width(), options.auto_seeds,
                      options.pipeline, options.workers)
                .mean;
  }
  result.index = delta_agg(result.cade, e_hat, options.alpha);
  return result;
}

}  // namespace agglo
