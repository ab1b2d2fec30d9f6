#pragma once

#include <cstdint>
#include <vector>

namespace agglo {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// An agglomerated disk configuration inside the box [0, L]^2.
struct Configuration {
  std::vector<Point> centers;  // insertion order
  int rho = 10;
  int box_size = 2400;
  double gamma_agg = 0.0;
  double target_p = 0.0;
  std::uint64_t seed = 0;
  double achieved_p = 0.0;
  // Acceptance log, parallel to `centers`: 1 when the particle was drawn
  // under the gamma <= gamma_agg branch and had to touch its predecessors.
  // Empty for configurations loaded from disk.
  std::vector<std::uint8_t> constrained;
};

struct GenerationParams {
  double gamma_agg = 0.0;
  double target_p = 0.1;
  int rho = 10;
  int box_size = 2400;
  std::uint64_t seed = 1;
  std::uint64_t max_attempts = 10'000'000;  // per particle, connectivity resampling
};

/// Rejection Monte-Carlo construction. The first disk lands uniformly at
/// random; every later step draws (x, y, gamma) in that order, accepts the
/// disk outright when gamma > gamma_agg and otherwise redraws only the
/// position until the disk touches the current union. Stops at the first
/// particle that pushes the raster coverage above target_p.
///
/// Randomness comes from std::mt19937_64 seeded with `seed`; reals are the
/// top 53 bits scaled to [0, 1), so runs are reproducible across platforms.
Configuration generate_configuration(const GenerationParams& params);

/// Closed disks of equal radius meet iff their centers are within 2 rho.
bool disks_intersect(Point a, Point b, double rho);

/// Foreground pixel count of the rasterized union divided by L^2.
double coverage_fraction(const Configuration& config);

/// Uniform bucket grid over centers with cell size 2 rho.
class CenterGrid {
 public:
  CenterGrid(double box_size, double rho);
  void insert(Point p);
  /// True when some stored center lies within 2 rho of `p`.
  bool touches(Point p) const;

 private:
  int cell_index(double v) const;

  double rho_;
  double cell_;
  int cells_;
  std::vector<std::vector<Point>> buckets_;
};

}  // namespace agglo
