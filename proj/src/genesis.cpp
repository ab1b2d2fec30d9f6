#include "agglo/genesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "agglo/raster.hpp"

namespace agglo {
namespace {

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  // [0, 1) from the top 53 bits
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

void validate(const GenerationParams& p) {
  if (!(p.target_p > 0.0) || p.target_p > 0.5)
    throw std::invalid_argument("generate: target_p must lie in (0, 0.5], got " +
                                std::to_string(p.target_p));
  if (!(p.gamma_agg >= 0.0 && p.gamma_agg <= 1.0))
    throw std::invalid_argument("generate: gamma_agg must lie in [0, 1]");
  if (p.rho < 2) throw std::invalid_argument("generate: rho must be at least 2 pixels");
  if (p.box_size <= 0 || p.box_size < 20 * p.rho)
    throw std::invalid_argument("generate: box_size must be at least 20 * rho");
  if (p.max_attempts == 0) throw std::invalid_argument("generate: max_attempts must be positive");
}

}  // namespace

bool disks_intersect(Point a, Point b, double rho) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double reach = 2.0 * rho;
  return dx * dx + dy * dy <= reach * reach;
}

CenterGrid::CenterGrid(double box_size, double rho)
    : rho_(rho), cell_(2.0 * rho), cells_(static_cast<int>(std::ceil(box_size / (2.0 * rho)))) {
  if (cells_ < 1) cells_ = 1;
  buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
}

int CenterGrid::cell_index(double v) const {
  int c = static_cast<int>(v / cell_);
  if (c < 0) c = 0;
  if (c >= cells_) c = cells_ - 1;
  return c;
}

void CenterGrid::insert(Point p) {
  buckets_[static_cast<std::size_t>(cell_index(p.y)) * cells_ + cell_index(p.x)].push_back(p);
}

bool CenterGrid::touches(Point p) const {
  const int cx = cell_index(p.x);
  const int cy = cell_index(p.y);
  for (int gy = std::max(cy - 1, 0); gy <= std::min(cy + 1, cells_ - 1); ++gy)
    for (int gx = std::max(cx - 1, 0); gx <= std::min(cx + 1, cells_ - 1); ++gx)
      for (const Point& q : buckets_[static_cast<std::size_t>(gy) * cells_ + gx])
        if (disks_intersect(p, q, rho_)) return true;
  return false;
}

Configuration generate_configuration(const GenerationParams& params) {
  validate(params);

  Configuration config;
  config.rho = params.rho;
  config.box_size = params.box_size;
  config.gamma_agg = params.gamma_agg;
  config.target_p = params.target_p;
  config.seed = params.seed;

  const double L = params.box_size;
  const double total = L * L;
  UniformStream rng(params.seed);
  BinaryImage coverage(params.box_size, params.box_size);
  CenterGrid grid(L, params.rho);
  std::size_t covered = 0;

  auto place = [&](Point c, bool constrained) {
    config.centers.push_back(c);
    config.constrained.push_back(constrained ? 1 : 0);
    grid.insert(c);
    covered += paint_disk(coverage, c, params.rho);
  };

  {
    const double x = L * rng.next();
    const double y = L * rng.next();
    place({x, y}, false);
  }
  while (static_cast<double>(covered) / total <= params.target_p) {
    Point c{L * rng.next(), L * rng.next()};
    const double gamma = rng.next();
    if (gamma > params.gamma_agg) {
      place(c, false);
      continue;
    }
    std::uint64_t attempts = 1;
    while (!grid.touches(c)) {
      if (++attempts > params.max_attempts)
        throw std::runtime_error("generate: connectivity resampling exceeded " +
                                 std::to_string(params.max_attempts) + " attempts at particle " +
                                 std::to_string(config.centers.size()));
      c = {L * rng.next(), L * rng.next()};
    }
    place(c, true);
  }
  config.achieved_p = static_cast<double>(covered) / total;
  return config;
}

}  // namespace agglo
