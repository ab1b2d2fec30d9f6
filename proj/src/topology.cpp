#include "agglo/topology.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace agglo {

Connectivity parse_connectivity(std::string_view text) {
  if (text == "8-4") return Connectivity::k8_4;
  if (text == "4-8") return Connectivity::k4_8;
  throw std::invalid_argument("unknown connectivity '" + std::string(text) + "' (use 8-4 or 4-8)");
}

std::string_view to_string(Connectivity c) { return c == Connectivity::k8_4 ? "8-4" : "4-8"; }

BitQuadCounts bit_quad_counts(const BinaryImage& image) {
  using Word = BinaryImage::Word;
  const int nw = image.words_per_row();
  const std::vector<Word> zeros(static_cast<std::size_t>(nw), 0);
  BitQuadCounts counts;

  // Window at column x spans pixels x-1 and x of rows y-1 and y, for
  // x in [0, W] and y in [0, H]; rows -1 and H are background.
  for (int y = 0; y <= image.height(); ++y) {
    const Word* top = y > 0 ? image.row(y - 1).data() : zeros.data();
    const Word* bot = y < image.height() ? image.row(y).data() : zeros.data();
    Word top_carry = 0;
    Word bot_carry = 0;
    for (int w = 0; w < nw; ++w) {
      const Word b = top[w];
      const Word d = bot[w];
      const Word a = (b << 1) | top_carry;
      const Word c = (d << 1) | bot_carry;
      top_carry = b >> 63;
      bot_carry = d >> 63;

      const Word odd = a ^ b ^ c ^ d;
      const Word two_or_more = (a & b) | (a & c) | (a & d) | (b & c) | (b & d) | (c & d);
      const Word diag = (a & d & ~b & ~c) | (b & c & ~a & ~d);
      counts.q1 += std::popcount(odd & ~two_or_more);
      counts.q3 += std::popcount(odd & two_or_more);
      counts.qd += std::popcount(diag);
    }
  }
  return counts;
}

std::int64_t euler_number(const BinaryImage& image, Connectivity conn) {
  const BitQuadCounts q = bit_quad_counts(image);
  const std::int64_t sign = conn == Connectivity::k8_4 ? -2 : 2;
  return (q.q1 - q.q3 + sign * q.qd) / 4;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Number of components of pixels with value `phase`; when `interior_only`,
// components touching the frame are not counted.
std::int64_t count_components(const BinaryImage& image, bool phase, bool eight, bool interior_only) {
  const int w = image.width();
  const int h = image.height();
  const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  DisjointSets sets(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (image.get(x, y) != phase) continue;
      if (x > 0 && image.get(x - 1, y) == phase) sets.join(idx(x, y), idx(x - 1, y));
      if (y > 0 && image.get(x, y - 1) == phase) sets.join(idx(x, y), idx(x, y - 1));
      if (eight && y > 0) {
        if (x > 0 && image.get(x - 1, y - 1) == phase) sets.join(idx(x, y), idx(x - 1, y - 1));
        if (x + 1 < w && image.get(x + 1, y - 1) == phase) sets.join(idx(x, y), idx(x + 1, y - 1));
      }
    }
  }
  std::vector<char> touches_frame(static_cast<std::size_t>(w) * h, 0);
  if (interior_only) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (image.get(x, y) == phase && (x == 0 || y == 0 || x == w - 1 || y == h - 1))
          touches_frame[sets.find(idx(x, y))] = 1;
  }
  std::int64_t n = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (image.get(x, y) == phase && sets.find(idx(x, y)) == idx(x, y) && !touches_frame[idx(x, y)])
        ++n;
  return n;
}

}  // namespace

std::int64_t euler_by_components(const BinaryImage& image, Connectivity conn) {
  const bool fg_eight = conn == Connectivity::k8_4;
  const std::int64_t components = count_components(image, true, fg_eight, false);
  const std::int64_t holes = count_components(image, false, !fg_eight, true);
  return components - holes;
}

}  // namespace agglo
