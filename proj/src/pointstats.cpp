#include "agglo/pointstats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "agglo/parallel.hpp"
#include "agglo/raster.hpp"

namespace agglo {

std::vector<double> nearest_neighbor_distances(std::span<const Point> points, double box_size) {
  const std::size_t n = points.size();
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  if (n < 2) return out;

  // Grid over the bounding box of the points, ~1 point per cell. Anchoring
  // at the points rather than at the box keeps results exact under sign
  // flips and coordinate swaps.
  double x_min = points[0].x, x_max = points[0].x, y_min = points[0].y, y_max = points[0].y;
  for (const Point& p : points) {
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
  double cell = std::max(x_max - x_min, y_max - y_min) / cells;
  if (!(cell > 0.0)) cell = box_size > 0.0 ? box_size : 1.0;
  auto index = [&](double v, double lo) {
    return std::clamp(static_cast<int>((v - lo) / cell), 0, cells - 1);
  };
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(cells) * cells);
  for (std::size_t i = 0; i < n; ++i)
    buckets[static_cast<std::size_t>(index(points[i].y, y_min)) * cells + index(points[i].x, x_min)]
        .push_back(i);

  for (std::size_t i = 0; i < n; ++i) {
    const Point p = points[i];
    const int cx = index(p.x, x_min);
    const int cy = index(p.y, y_min);
    double best2 = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < cells; ++ring) {
      for (int gy = cy - ring; gy <= cy + ring; ++gy) {
        if (gy < 0 || gy >= cells) continue;
        const bool edge_row = gy == cy - ring || gy == cy + ring;
        for (int gx = cx - ring; gx <= cx + ring; gx += (edge_row ? 1 : 2 * ring)) {
          if (gx >= 0 && gx < cells) {
            for (std::size_t j : buckets[static_cast<std::size_t>(gy) * cells + gx]) {
              if (j == i) continue;
              const double dx = points[j].x - p.x;
              const double dy = points[j].y - p.y;
              best2 = std::min(best2, dx * dx + dy * dy);
            }
          }
          if (ring == 0) break;
        }
      }
      // anything in ring + 1 or beyond is at least ring * cell away
      const double reach = ring * cell;
      if (best2 <= reach * reach) break;
    }
    out[i] = std::sqrt(best2);
  }
  return out;
}

double clark_evans(std::span<const Point> points, double box_size, EdgeCorrection correction) {
  if (points.size() < 2) throw std::invalid_argument("clark_evans: need at least two points");
  const auto d = nearest_neighbor_distances(points, box_size);
  double sum = 0.0;
  for (double v : d) sum += v;
  const double n = static_cast<double>(points.size());
  const double mean = sum / n;
  const double area = box_size * box_size;
  double expected = 0.5 * std::sqrt(area / n);
  if (correction == EdgeCorrection::kDonnelly)
    expected += (0.0514 + 0.041 / std::sqrt(n)) * (4.0 * box_size) / n;
  return mean / expected;
}

double clark_evans(const Configuration& config, EdgeCorrection correction) {
  return clark_evans(config.centers, config.box_size, correction);
}

MinkowskiTriple minkowski_reference(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("minkowski_reference: x must be non-negative");
  MinkowskiTriple t;
  const double decay = std::exp(-x);
  t.e = (1.0 - x) * decay;
  t.a = x == 0.0 ? 1.0 : -std::expm1(-x) / x;
  t.l = decay;
  return t;
}

std::int64_t boundary_edge_count(const BinaryImage& image) {
  using Word = BinaryImage::Word;
  const int nw = image.words_per_row();
  std::int64_t edges = 0;
  for (int y = 0; y < image.height(); ++y) {
    auto r = image.row(y);
    for (int w = 0; w < nw; ++w) {
      // pixel x vs x + 1, both inside the frame
      const Word next = (r[w] >> 1) | (w + 1 < nw ? r[w + 1] << 63 : 0);
      const Word pair_mask = image.word_mask(w) & (image.word_mask(w) >> 1 |
                                                   (w + 1 < nw ? image.word_mask(w + 1) << 63 : 0));
      edges += std::popcount((r[w] ^ next) & pair_mask);
      if (y + 1 < image.height()) edges += std::popcount(r[w] ^ image.row(y + 1)[w]);
    }
  }
  return edges;
}

MinkowskiTriple measured_minkowski(const BinaryImage& image, std::int64_t n_particles,
                                   double rho_effective, Connectivity conn) {
  if (n_particles <= 0) throw std::invalid_argument("measured_minkowski: need n_particles > 0");
  if (!(rho_effective > 0.0)) throw std::invalid_argument("measured_minkowski: rho must be positive");
  const double a = image.pixel_size();
  const double area = static_cast<double>(image.pixel_count()) * a * a;
  const double n = static_cast<double>(n_particles);
  const double x = n * std::numbers::pi * rho_effective * rho_effective / area;

  MinkowskiTriple t;
  t.e = static_cast<double>(euler_number(image, conn)) / n;
  t.a = volume_fraction(image) / x;
  const double perimeter = std::numbers::pi / 4.0 * static_cast<double>(boundary_edge_count(image)) * a;
  t.l = perimeter / (2.0 * std::numbers::pi * rho_effective * n);
  return t;
}

EulerRadiusCurve euler_radius_curve(std::span<const Point> centers, const std::vector<double>& radii,
                                    int box_size, Connectivity conn, int workers) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw std::invalid_argument("euler_radius_curve: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("euler_radius_curve: radii must be increasing");
  }
  EulerRadiusCurve curve;
  curve.radii = radii;
  curve.chi.assign(radii.size(), 0);
  rethrow_first(parallel_for(radii.size(), workers, [&](std::size_t i) {
    curve.chi[i] = euler_number(rasterize_disks(centers, radii[i], box_size), conn);
  }));
  return curve;
}

}  // namespace agglo
