#include "agglo/raster.hpp"

namespace agglo {

std::size_t paint_disk(BinaryImage& image, Point center, double radius) {
  std::size_t added = 0;
  for_each_disk_span(center.x, center.y, radius, image.width(), image.height(),
                     [&](int y, int x0, int x1) { added += image.fill_span(y, x0, x1); });
  return added;
}

BinaryImage rasterize_disks(std::span<const Point> centers, double radius, int box_size) {
  BinaryImage image(box_size, box_size);
  for (const Point& c : centers) paint_disk(image, c, radius);
  return image;
}

BinaryImage rasterize(const Configuration& config) {
  return rasterize_disks(config.centers, config.rho, config.box_size);
}

double coverage_fraction(const Configuration& config) {
  return volume_fraction(rasterize(config));
}

}  // namespace agglo
