#pragma once

#include <cstdint>
#include <string_view>

#include "agglo/binary_image.hpp"

namespace agglo {

/// Digital topology pair: foreground adjacency first, background second.
/// Only the two dual pairs are representable.
enum class Connectivity : std::uint8_t {
  k8_4,  // 8-connected foreground, 4-connected background (default)
  k4_8,
};

Connectivity parse_connectivity(std::string_view text);  // "8-4" | "4-8"
std::string_view to_string(Connectivity c);

struct BitQuadCounts {
  std::int64_t q1 = 0;  // windows with exactly one foreground pixel
  std::int64_t q3 = 0;  // exactly three
  std::int64_t qd = 0;  // the two diagonal patterns
};

/// 2x2 pattern census of the image embedded in an infinite background.
BitQuadCounts bit_quad_counts(const BinaryImage& image);

/// Euler number by the bit-quad method in one pass over packed rows:
/// (Q1 - Q3 - 2 QD) / 4 for (8,4), (Q1 - Q3 + 2 QD) / 4 for (4,8).
std::int64_t euler_number(const BinaryImage& image, Connectivity conn = Connectivity::k8_4);

/// Components minus holes via union-find labeling. Background components
/// that reach the frame are not holes. Independent of the bit-quad path.
std::int64_t euler_by_components(const BinaryImage& image,
                                 Connectivity conn = Connectivity::k8_4);

}  // namespace agglo
