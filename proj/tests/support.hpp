#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "agglo/binary_image.hpp"
#include "agglo/genesis.hpp"

namespace testing_support {

inline agglo::BinaryImage random_image(std::mt19937_64& rng, int w, int h, double density) {
  agglo::BinaryImage img(w, h);
  std::bernoulli_distribution on(density);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (on(rng)) img.set(x, y);
  return img;
}

// Pixel-by-pixel dilation, used as an oracle for the packed implementation.
inline agglo::BinaryImage naive_dilate(const agglo::BinaryImage& in, bool square) {
  agglo::BinaryImage out(in.width(), in.height(), in.pixel_size());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) {
      bool hit = false;
      for (int dy = -1; dy <= 1 && !hit; ++dy)
        for (int dx = -1; dx <= 1 && !hit; ++dx) {
          if (!square && dx != 0 && dy != 0) continue;
          const int sx = x + dx, sy = y + dy;
          if (sx >= 0 && sy >= 0 && sx < in.width() && sy < in.height() && in.get(sx, sy)) hit = true;
        }
      if (hit) out.set(x, y);
    }
  return out;
}

// Direct membership test over every pixel.
inline agglo::BinaryImage naive_disks(const std::vector<agglo::Point>& centers, double r, int L) {
  agglo::BinaryImage img(L, L);
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x)
      for (const auto& c : centers) {
        const double dx = x + 0.5 - c.x, dy = y + 0.5 - c.y;
        if (dx * dx + dy * dy <= r * r) {
          img.set(x, y);
          break;
        }
      }
  return img;
}

inline bool subset(const agglo::BinaryImage& a, const agglo::BinaryImage& b) {
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y) && !b.get(x, y)) return false;
  return true;
}

}  // namespace testing_support
