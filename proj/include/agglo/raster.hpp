#pragma once

#include <cmath>
#include <span>

#include "agglo/binary_image.hpp"
#include "agglo/genesis.hpp"

namespace agglo {

/// Calls fn(y, x0, x1) for every row y of a width x height raster that has
/// pixels (x0..x1 inclusive) whose centers (x + 0.5, y + 0.5) lie within
/// `radius` of (cx, cy). Spans are clipped to the raster.
template <class Fn>
void for_each_disk_span(double cx, double cy, double radius, int width, int height, Fn&& fn) {
  const double r2 = radius * radius;
  auto inside = [&](int x, double dy2) {
    const double dx = x + 0.5 - cx;
    return dx * dx + dy2 <= r2;
  };
  int y0 = static_cast<int>(std::floor(cy - radius - 0.5));
  int y1 = static_cast<int>(std::ceil(cy + radius - 0.5));
  if (y0 < 0) y0 = 0;
  if (y1 > height - 1) y1 = height - 1;
  for (int y = y0; y <= y1; ++y) {
    const double dy = y + 0.5 - cy;
    const double dy2 = dy * dy;
    const double rem = r2 - dy2;
    if (rem < 0.0) continue;
    const double h = std::sqrt(rem);
    int x0 = static_cast<int>(std::ceil(cx - h - 0.5));
    int x1 = static_cast<int>(std::floor(cx + h - 0.5));
    // sqrt rounding may be off by one pixel at either end
    while (inside(x0 - 1, dy2)) --x0;
    while (x0 <= x1 && !inside(x0, dy2)) ++x0;
    while (inside(x1 + 1, dy2)) ++x1;
    while (x1 >= x0 && !inside(x1, dy2)) --x1;
    if (x0 > x1) continue;
    if (x0 < 0) x0 = 0;
    if (x1 > width - 1) x1 = width - 1;
    if (x0 > x1) continue;
    fn(y, x0, x1);
  }
}

/// Paints one disk; returns the number of newly covered pixels.
std::size_t paint_disk(BinaryImage& image, Point center, double radius);

/// L x L raster of the configuration: pixel (i, j) is foreground iff its
/// center lies within rho of some particle center.
BinaryImage rasterize(const Configuration& config);

/// Same membership rule for an arbitrary center set and radius.
BinaryImage rasterize_disks(std::span<const Point> centers, double radius, int box_size);

}  // namespace agglo
