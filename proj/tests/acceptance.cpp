// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "agglo/experiment.hpp"
#include "agglo/genesis.hpp"
#include "agglo/morphology.hpp"
#include "agglo/pointstats.hpp"
#include "agglo/raster.hpp"
#include "agglo/topology.hpp"

using namespace agglo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Reference 10-seed means, indexed [p][gamma] over p = 0.1..0.4, gamma = 0, 0.3, 0.6, 0.9.
constexpr std::array<std::array<double, 4>, 4> kCade{{{805.7, 582.9, 317.6, 141.9},
                                                      {2131.9, 1501.2, 821.9, 244.0},
                                                      {2878.5, 2035.2, 1121.9, 408.8},
                                                      {2705.3, 1966.3, 1066.6, 582.1}}};
constexpr std::array<std::array<double, 4>, 4> kDelta{{{0.000, 0.332, 0.727, 0.989},
                                                       {0.000, 0.355, 0.737, 1.063},
                                                       {0.000, 0.352, 0.732, 1.030},
                                                       {0.000, 0.328, 0.727, 0.942}}};
constexpr std::array<std::array<double, 4>, 4> kClarkEvans{{{1.018, 0.755, 0.574, 0.412},
                                                            {1.011, 0.837, 0.703, 0.556},
                                                            {1.006, 0.890, 0.788, 0.661},
                                                            {1.003, 0.927, 0.850, 0.741}}};

const SummaryCell& cell(const std::vector<SummaryCell>& cells, double p, double g) {
  for (const auto& c : cells)
    if (c.p == p && c.gamma == g) return c;
  throw std::runtime_error("missing summary cell");
}

void table_one() {
  const auto t0 = Clock::now();
  const std::vector<std::size_t> expected{1, 9, 21, 37, 69, 97, 129, 185, 229, 277};
  BinaryImage img(41, 41);
  img.set(20, 20);
  const ThickeningSchedule s = default_schedule();
  std::string got;
  bool ok = true;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    got += (k ? "," : "") + std::to_string(img.count_foreground());
    ok = ok && img.count_foreground() == expected[k];
    img = dilate(img, s.steps[k]);
  }
  const double dt = seconds_since(t0);
  report(1, "thickening pixel counts", ok && dt < 1.0, got + fmt(" in %.3f s", dt));
}

void euler_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> size(1, 128);
  std::uniform_real_distribution<double> density(0.05, 0.95);
  int mismatches = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    BinaryImage img(size(rng), size(rng));
    std::bernoulli_distribution on(density(rng));
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x)
        if (on(rng)) img.set(x, y);
    if (euler_number(img) != euler_by_components(img)) ++mismatches;
  }
  const double dt = seconds_since(t0);
  report(2, "bit-quad vs labeling Euler number", mismatches == 0 && dt < 10.0,
         fmt("%.0f/%.0f images agree in %.2f s", n - mismatches, n, dt));
}

void boolean_coverage(const ReportBundle& b, const ExperimentSpec& spec) {
  bool ok = true;
  std::string detail;
  for (double p : spec.p_values) {
    std::vector<double> n;
    for (const auto& r : b.runs)
      if (r.p == p && r.gamma == 0.0) n.push_back(static_cast<double>(r.n_particles));
    const double mean = std::accumulate(n.begin(), n.end(), 0.0) / n.size();
    double ss = 0;
    for (double v : n) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n.size() - 1));
    const double expected = -std::log(1 - p) * spec.box_size * spec.box_size /
                            (std::numbers::pi * spec.rho * spec.rho);
    const bool pass = std::abs(mean - expected) <= 3 * sd;
    ok = ok && pass;
    detail += fmt("p=%.1f n=%.1f vs %.1f (3sd=%.1f); ", p, mean, expected, 3 * sd);
  }
  report(3, "Boolean coverage particle counts", ok, detail);
}

template <class Check>
void table_check(int id, const char* name, const std::vector<SummaryCell>& cells,
                 const std::array<std::array<double, 4>, 4>& reference, Check&& check) {
  const double ps[] = {0.1, 0.2, 0.3, 0.4};
  const double gs[] = {0.0, 0.3, 0.6, 0.9};
  int passed = 0, checked = 0;
  std::string bad;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double ours = cell(cells, ps[i], gs[j]).avg;
      const auto [pass, note] = check(ours, reference[i][j], gs[j]);
      ++checked;
      if (pass) ++passed;
      else bad += fmt(" (p=%.1f,g=%.1f) %.4g vs %.4g", ps[i], gs[j], ours, reference[i][j]) + note + ";";
    }
  report(id, name, passed == checked,
         fmt("%.0f/%.0f cells within tolerance", passed, checked) + (bad.empty() ? "" : ", off:" + bad));
}

void monotonicity(const ReportBundle& b, const ExperimentSpec& spec) {
  bool ok = true;
  std::string detail;
  for (double p : spec.p_values) {
    for (std::size_t j = 1; j < spec.gamma_values.size(); ++j) {
      const double g0 = spec.gamma_values[j - 1], g1 = spec.gamma_values[j];
      const bool c = cell(b.cade_summary, p, g1).avg < cell(b.cade_summary, p, g0).avg;
      const bool e = cell(b.clark_evans_summary, p, g1).avg < cell(b.clark_evans_summary, p, g0).avg;
      const bool d = cell(b.delta_summary, p, g1).avg > cell(b.delta_summary, p, g0).avg;
      if (!(c && e && d)) {
        ok = false;
        detail += fmt("trend broken at p=%.1f g=%.1f; ", p, g1);
      }
    }
  }
  std::vector<double> ce, delta;
  for (const auto& r : b.runs) {
    ce.push_back(r.clark_evans);
    delta.push_back(r.delta);
  }
  const double n = static_cast<double>(ce.size());
  const double mc = std::accumulate(ce.begin(), ce.end(), 0.0) / n;
  const double md = std::accumulate(delta.begin(), delta.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < ce.size(); ++i) {
    sxy += (ce[i] - mc) * (delta[i] - md);
    sxx += (ce[i] - mc) * (ce[i] - mc);
    syy += (delta[i] - md) * (delta[i] - md);
  }
  const double r = sxy / std::sqrt(sxx * syy);
  ok = ok && r <= -0.9;
  report(7, "monotone trends and CE/delta correlation", ok,
         detail + fmt("Pearson r = %.4f over %.0f runs", r, n));
}

// The comparison is against a continuum union of disks. Under (8,4) two
// digital disks already merge when their pixels touch diagonally, about
// sqrt(2) px before the continuum disks meet, which biases chi(r) by O(1/r).
// The estimator therefore uses the 4-connected foreground; the (8,4) value
// is printed alongside.
void minkowski_curves(const ExperimentSpec& spec) {
  std::vector<double> radii;
  for (double r = 1.0; r <= 40.0; r += 1.0) radii.push_back(r);
  bool ok = true;
  std::string detail;
  for (double p : spec.p_values) {
    // per-radius deviation averaged over seeds; x uses each seed's own lambda
    std::vector<double> dev4(radii.size(), 0.0), dev8(radii.size(), 0.0), x_sum(radii.size(), 0.0);
    for (std::uint64_t seed : spec.seeds) {
      GenerationParams g;
      g.target_p = p;
      g.rho = spec.rho;
      g.box_size = spec.box_size;
      g.seed = seed;
      const Configuration c = generate_configuration(g);
      const double n = static_cast<double>(c.centers.size());
      const double lambda = n / (double(spec.box_size) * spec.box_size);
      rethrow_first(parallel_for(radii.size(), spec.workers, [&](std::size_t i) {
        const BinaryImage img = rasterize_disks(c.centers, radii[i], spec.box_size);
        const double x = lambda * std::numbers::pi * radii[i] * radii[i];
        const double e = minkowski_reference(x).e;
        x_sum[i] += x;
        dev4[i] += euler_number(img, Connectivity::k4_8) / n - e;
        dev8[i] += euler_number(img, Connectivity::k8_4) / n - e;
      }));
    }
    double sup4 = 0, sup8 = 0;
    const double m = static_cast<double>(spec.seeds.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double x = x_sum[i] / m;
      if (x < 0.1 || x > 1.5) continue;
      sup4 = std::max(sup4, std::abs(dev4[i] / m));
      sup8 = std::max(sup8, std::abs(dev8[i] / m));
    }
    ok = ok && sup4 <= 0.1;
    detail += fmt("p=%.1f sup|chi/n - e| = %.4f (8-4: %.4f); ", p, sup4, sup8);
  }
  report(8, "Euler curve vs Boolean model", ok, detail);
}

void invariances(const ReportBundle& b, const ExperimentSpec& spec) {
  std::map<double, double> e_hat;
  for (const auto& c : b.calibration) e_hat[c.p] = c.mean;
  int checks = 0, broken = 0;
  auto expect = [&](bool same) {
    ++checks;
    if (!same) ++broken;
  };
  for (double p : spec.p_values)
    for (double gamma : {0.0, 0.6}) {
      GenerationParams g;
      g.gamma_agg = gamma;
      g.target_p = p;
      g.rho = spec.rho;
      g.box_size = spec.box_size;
      g.seed = 1;
      const Configuration c = generate_configuration(g);
      const BinaryImage img = rasterize(c);
      const std::array<BinaryImage, 3> variants{img.rotated90(), img.mirrored_horizontal(),
                                                img.mirrored_vertical()};
      const auto chi = euler_number(img);
      const auto v = image_cade(img, spec.rho, spec.pipeline);
      const double d = delta_agg(v, e_hat.at(p), spec.alpha).delta;
      for (const auto& t : variants) {
        expect(euler_number(t) == chi);
        const auto vt = image_cade(t, spec.rho, spec.pipeline);
        expect(vt.value == v.value);
        expect(delta_agg(vt, e_hat.at(p), spec.alpha).delta == d);
      }
      const double ce = clark_evans(c);
      std::vector<Point> rot, mir;
      for (const Point& q : c.centers) {
        rot.push_back({-q.y, q.x});
        mir.push_back({-q.x, q.y});
      }
      expect(clark_evans(rot, c.box_size) == ce);
      expect(clark_evans(mir, c.box_size) == ce);
    }
  int prefix_ok = 0, prefix_total = 0;
  for (double gamma : spec.gamma_values)
    for (std::uint64_t seed : spec.seeds) {
      GenerationParams g;
      g.gamma_agg = gamma;
      g.rho = spec.rho;
      g.box_size = spec.box_size;
      g.seed = seed;
      g.target_p = 0.1;
      const auto lo = generate_configuration(g).centers;
      g.target_p = 0.4;
      const auto hi = generate_configuration(g).centers;
      ++prefix_total;
      if (lo.size() <= hi.size() && std::equal(lo.begin(), lo.end(), hi.begin())) ++prefix_ok;
    }
  report(9, "exact invariances and hierarchy", broken == 0 && prefix_ok == prefix_total,
         fmt("%.0f/%.0f rotation/mirror checks identical, %.0f/%.0f prefix checks", checks - broken, checks,
             prefix_ok, prefix_total));
}

}  // namespace

int main() {
  table_one();
  euler_oracle();

  ExperimentSpec spec;
  spec.curves = false;
  const auto t0 = Clock::now();
  const ReportBundle b = run_experiment(spec);
  std::printf("full grid: %zu runs in %.1f s\n", b.runs.size(), seconds_since(t0));
  if (!b.ok()) {
    for (const auto& f : b.failures) std::printf("run failure: %s\n", f.c_str());
    return 1;
  }

  boolean_coverage(b, spec);
  table_check(4, "CADE means vs reference values", b.cade_summary, kCade,
              [](double ours, double ref, double g) {
                const double tol = g == 0.9 ? 0.25 : 0.10;
                const double rel = (ours - ref) / ref;
                return std::pair{std::abs(rel) <= tol, fmt(" (%+.1f%%)", 100 * rel)};
              });
  table_check(5, "delta means vs reference values", b.delta_summary, kDelta,
              [](double ours, double ref, double g) {
                if (g == 0.0) return std::pair{std::abs(ours) < 5e-4, std::string()};
                return std::pair{std::abs(ours - ref) <= 0.08, std::string()};
              });
  table_check(6, "Clark-Evans means vs reference values", b.clark_evans_summary, kClarkEvans,
              [](double ours, double ref, double) {
                return std::pair{std::abs(ours - ref) <= 0.03, std::string()};
              });
  monotonicity(b, spec);
  minkowski_curves(spec);
  invariances(b, spec);

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
