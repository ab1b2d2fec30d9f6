#include "agglo/binary_image.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace agglo {

BinaryImage::BinaryImage(int width, int height, double pixel_size)
    : width_(width),
      height_(height),
      words_per_row_(width / kWordBits + 1),
      pixel_size_(pixel_size) {
  if (width < 0 || height < 0) throw std::invalid_argument("BinaryImage: negative dimension");
  if (!(pixel_size > 0.0)) throw std::invalid_argument("BinaryImage: pixel size must be positive");
  bits_.assign(static_cast<std::size_t>(words_per_row_) * static_cast<std::size_t>(height), 0);
}

void BinaryImage::set(int x, int y, bool value) {
  Word& w = row(y)[static_cast<std::size_t>(x) / kWordBits];
  const Word bit = Word{1} << (x % kWordBits);
  w = value ? (w | bit) : (w & ~bit);
}

std::size_t BinaryImage::fill_span(int y, int x0, int x1) {
  if (y < 0 || y >= height_) return 0;
  if (x0 < 0) x0 = 0;
  if (x1 >= width_) x1 = width_ - 1;
  if (x0 > x1) return 0;
  auto r = row(y);
  std::size_t added = 0;
  const int w0 = x0 / kWordBits;
  const int w1 = x1 / kWordBits;
  for (int w = w0; w <= w1; ++w) {
    Word mask = ~Word{0};
    if (w == w0) mask &= ~Word{0} << (x0 % kWordBits);
    if (w == w1) {
      const int hi = x1 % kWordBits;
      if (hi != kWordBits - 1) mask &= (Word{1} << (hi + 1)) - 1;
    }
    added += static_cast<std::size_t>(std::popcount(mask & ~r[w]));
    r[w] |= mask;
  }
  return added;
}

BinaryImage::Word BinaryImage::word_mask(int w) const {
  const int lo = w * kWordBits;
  if (lo + kWordBits <= width_) return ~Word{0};
  if (lo >= width_) return 0;
  return (Word{1} << (width_ - lo)) - 1;
}

std::size_t BinaryImage::count_foreground() const {
  std::size_t n = 0;
  for (Word w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BinaryImage BinaryImage::rotated90() const {
  BinaryImage out(height_, width_, pixel_size_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (get(x, y)) out.set(y, width_ - 1 - x);
  return out;
}

BinaryImage BinaryImage::mirrored_horizontal() const {
  BinaryImage out(width_, height_, pixel_size_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (get(x, y)) out.set(width_ - 1 - x, y);
  return out;
}

BinaryImage BinaryImage::mirrored_vertical() const {
  BinaryImage out(width_, height_, pixel_size_);
  for (int y = 0; y < height_; ++y) {
    auto src = row(y);
    auto dst = out.row(height_ - 1 - y);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

double volume_fraction(const BinaryImage& image) {
  if (image.pixel_count() == 0) return 0.0;
  return static_cast<double>(image.count_foreground()) / static_cast<double>(image.pixel_count());
}

}  // namespace agglo
