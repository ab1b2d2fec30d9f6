#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace agglo {

/// Packed binary raster. Bit x of row y is pixel (x, y); 1 = foreground
/// (particle phase). Every row is stored in `words_per_row()` 64-bit words
/// and always keeps at least one zero bit past `width()`, which the
/// bit-quad scan relies on as its right-hand padding column.
class BinaryImage {
 public:
  using Word = std::uint64_t;
  static constexpr int kWordBits = 64;

  BinaryImage() = default;
  BinaryImage(int width, int height, double pixel_size = 1.0);

  int width() const { return width_; }
  int height() const { return height_; }
  double pixel_size() const { return pixel_size_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  int words_per_row() const { return words_per_row_; }

  bool get(int x, int y) const {
    return (row(y)[static_cast<std::size_t>(x) / kWordBits] >> (x % kWordBits)) & 1u;
  }
  void set(int x, int y, bool value = true);

  /// Sets pixels [x0, x1] (inclusive, clipped to the row) of row y and
  /// returns how many of them were background before.
  std::size_t fill_span(int y, int x0, int x1);

  std::span<const Word> row(int y) const {
    return {bits_.data() + static_cast<std::size_t>(y) * words_per_row_,
            static_cast<std::size_t>(words_per_row_)};
  }
  std::span<Word> row(int y) {
    return {bits_.data() + static_cast<std::size_t>(y) * words_per_row_,
            static_cast<std::size_t>(words_per_row_)};
  }

  /// Mask of valid pixel bits for word `w` of any row.
  Word word_mask(int w) const;

  std::size_t count_foreground() const;

  BinaryImage rotated90() const;  // counter-clockwise: (x, y) -> (y, W-1-x)
  BinaryImage mirrored_horizontal() const;
  BinaryImage mirrored_vertical() const;

  friend bool operator==(const BinaryImage& a, const BinaryImage& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.bits_ == b.bits_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int words_per_row_ = 1;
  double pixel_size_ = 1.0;
  std::vector<Word> bits_;
};

/// Foreground count / total count; 0 for an empty raster.
double volume_fraction(const BinaryImage& image);

}  // namespace agglo
