#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agglo/binary_image.hpp"
#include "agglo/morphology.hpp"
#include "agglo/topology.hpp"

namespace agglo {

inline constexpr double kDefaultAlpha = 1.2;

/// Total absolute change of the Euler number over steps n1+1..n2 of a trace.
struct CadeValue {
  std::int64_t value = 0;
  int n1 = 1;
  int n2 = 10;
  std::string source;
};

CadeValue cade(const EulerTrace& trace, int n1, int n2);

/// Thickening schedule and digital topology used by every image pipeline.
struct PipelineOptions {
  ScheduleVariant variant = ScheduleVariant::kCountMatched;
  int n1 = 1;
  Connectivity connectivity = Connectivity::k8_4;
};

/// n2 = round(rho / pixel size).
int thickening_steps(double rho, double pixel_size);

/// Thicken by round(rho / a) steps and sum |dchi| over steps n1+1..n2.
CadeValue image_cade(const BinaryImage& image, double rho, const PipelineOptions& options = {});

/// Mean CADE of gamma = 0 configurations at one volume fraction.
struct CalibrationEntry {
  double p = 0.0;
  int rho = 10;
  int box_size = 2400;
  std::vector<std::uint64_t> seeds;
  std::vector<std::int64_t> cades;  // one per seed
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // sample standard deviation; NaN with a single seed

  bool has_dispersion() const { return seeds.size() >= 2; }
};

/// Statistics over already computed CADE values. Accepts a single seed
/// (stddev is then NaN) so degenerate experiment grids still report.
CalibrationEntry summarize_calibration(double p, int rho, int box_size,
                                       std::vector<std::uint64_t> seeds,
                                       std::vector<std::int64_t> cades);

/// Generates gamma = 0 configurations for every seed and averages their
/// CADE. Requires p in (0, 0.5] and at least two seeds.
CalibrationEntry calibrate(double p, int rho, int box_size, const std::vector<std::uint64_t>& seeds,
                           const PipelineOptions& options = {}, int workers = 1);

/// Calibration entries over a volume-fraction grid. Lookups snap to an
/// entry within `snap_tolerance` of the query, otherwise interpolate the
/// mean linearly between the neighbouring entries.
class CalibrationTable {
 public:
  static constexpr double kDefaultSnap = 0.005;

  CalibrationTable() = default;
  explicit CalibrationTable(std::vector<CalibrationEntry> entries);

  const std::vector<CalibrationEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Standard-pattern mean at volume fraction p. Throws std::out_of_range
  /// when p lies outside the table and no entry is within the snap distance.
  double e_hat(double p, double snap_tolerance = kDefaultSnap) const;

 private:
  std::vector<CalibrationEntry> entries_;  // sorted by p
};

/// p = 0.05, 0.10, ..., 0.50.
std::vector<double> default_calibration_grid();

CalibrationTable build_calibration_table(const std::vector<double>& p_grid, int rho, int box_size,
                                         const std::vector<std::uint64_t>& seeds,
                                         const PipelineOptions& options = {}, int workers = 1);

struct AggIndex {
  double delta = 0.0;
  double alpha = kDefaultAlpha;
  double e_hat_p = 0.0;
  std::int64_t cade = 0;
};

/// alpha * (E_p - CADE) / E_p. Rejects E_p <= 0.
AggIndex delta_agg(const CadeValue& value, double e_hat_p, double alpha = kDefaultAlpha);
AggIndex delta_agg(const CadeValue& value, const CalibrationEntry& calibration,
                   double alpha = kDefaultAlpha);

struct AnalysisOptions {
  PipelineOptions pipeline;
  double alpha = kDefaultAlpha;
  // Seeds for on-demand calibration when no table is supplied.
  std::vector<std::uint64_t> auto_seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int workers = 1;
};

struct AnalysisResult {
  AggIndex index;
  double volume_fraction = 0.0;
  CadeValue cade;
  std::vector<std::string> warnings;
};

/// Full thicken -> CADE -> delta pipeline on an arbitrary picture. Without a
/// table the image's own volume fraction is calibrated on demand in an
/// L x L window (requires a square image).
AnalysisResult analyze_image(const BinaryImage& image, double rho,
                             const std::optional<CalibrationTable>& calibration,
                             const AnalysisOptions& options = {});

}  // namespace agglo
