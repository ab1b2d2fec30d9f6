#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "agglo/binary_image.hpp"
#include "agglo/genesis.hpp"
#include "agglo/topology.hpp"

namespace agglo {

enum class EdgeCorrection : std::uint8_t {
  kNone,
  kDonnelly,  // perimeter term added to the CSR expectation of the mean NN distance
};

/// Nearest-neighbour distance of every point (grid accelerated).
std::vector<double> nearest_neighbor_distances(std::span<const Point> points, double box_size);

/// Mean nearest-neighbour distance over its complete-spatial-randomness
/// expectation 1 / (2 sqrt(lambda)), lambda = n / L^2. Needs >= 2 points.
double clark_evans(std::span<const Point> points, double box_size,
                   EdgeCorrection correction = EdgeCorrection::kNone);
double clark_evans(const Configuration& config, EdgeCorrection correction = EdgeCorrection::kNone);

/// Normalized Euler number, area and perimeter of a Boolean model at
/// x = lambda * pi * r^2.
struct MinkowskiTriple {
  double e = 1.0;
  double a = 1.0;
  double l = 1.0;
};

/// e(x) = (1 - x) exp(-x), a(x) = (1 - exp(-x)) / x, l(x) = exp(-x).
MinkowskiTriple minkowski_reference(double x);

/// Foreground/background pixel-edge adjacencies inside the frame (the
/// frame itself is not counted as boundary).
std::int64_t boundary_edge_count(const BinaryImage& image);

/// Measured counterpart of the reference triple for an image of n disks
/// of radius rho_effective. The raw edge count is scaled by pi / 4, the
/// mean projection factor of the 4-neighbour boundary length for isotropic
/// boundaries.
MinkowskiTriple measured_minkowski(const BinaryImage& image, std::int64_t n_particles,
                                   double rho_effective,
                                   Connectivity conn = Connectivity::k8_4);

struct EulerRadiusCurve {
  std::vector<double> radii;
  std::vector<std::int64_t> chi;
};

/// chi of the union of radius-r disks around fixed centers, for each r.
EulerRadiusCurve euler_radius_curve(std::span<const Point> centers, const std::vector<double>& radii,
                                    int box_size, Connectivity conn = Connectivity::k8_4,
                                    int workers = 1);

}  // namespace agglo
