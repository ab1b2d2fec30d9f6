// agglo: agglomeration measurement and synthetic agglomerate generation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "agglo/cade.hpp"
#include "agglo/experiment.hpp"
#include "agglo/genesis.hpp"
#include "agglo/io_store.hpp"
#include "agglo/morphology.hpp"
#include "agglo/pointstats.hpp"
#include "agglo/raster.hpp"
#include "agglo/topology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 1;
constexpr int kExitRuntime = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  int workers = agglo::default_worker_count();
  std::string schedule = "count-matched";
  std::string connectivity = "8-4";

  agglo::PipelineOptions pipeline(int n1) const {
    agglo::PipelineOptions opt;
    opt.variant = agglo::parse_schedule_variant(schedule);
    opt.connectivity = agglo::parse_connectivity(connectivity);
    opt.n1 = n1;
    return opt;
  }
};

// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  fn(out);
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  if (count < 1) throw std::invalid_argument("--seeds must be at least 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure particle agglomeration in binary images (CADE, delta_agg) and generate "
               "calibrated synthetic agglomerates."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(agglo::kToolVersion));

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (first seed of a seed range)")->capture_default_str();
  app.add_option("--out", g.out, "Output file, or output directory for 'experiment'");
  app.add_option("--workers", g.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--schedule", g.schedule, "Thickening schedule")
      ->check(CLI::IsMember({"printed", "count-matched"}))
      ->capture_default_str();
  app.add_option("--connectivity", g.connectivity, "Foreground-background digital topology")
      ->check(CLI::IsMember({"8-4", "4-8"}))
      ->capture_default_str();

  // generate
  double gen_gamma = 0.0, gen_p = 0.1;
  int gen_rho = 10, gen_box = 2400;
  std::string gen_image;
  auto* generate = app.add_subcommand("generate", "Generate an agglomerated disk configuration (centers CSV)");
  generate->add_option("--gamma", gen_gamma, "Agglomeration parameter in [0,1]")->required();
  generate->add_option("--p", gen_p, "Target volume fraction in (0,0.5]")->required();
  generate->add_option("--rho", gen_rho, "Disk radius in pixels")->capture_default_str();
  generate->add_option("--box", gen_box, "Box size L in pixels")->capture_default_str();
  generate->add_option("--image", gen_image, "Also write the rasterized configuration (P4)");

  // rasterize
  std::string ras_centers;
  bool ras_plain = false;
  auto* rasterize = app.add_subcommand("rasterize", "Rasterize a centers file to a portable bitmap");
  rasterize->add_option("--centers", ras_centers, "Centers CSV")->required()->check(CLI::ExistingFile);
  rasterize->add_flag("--plain", ras_plain, "Write plain P1 instead of raw P4");

  // euler
  std::string eul_image;
  bool eul_oracle = false;
  auto* euler = app.add_subcommand("euler", "Euler number of a binary image");
  euler->add_option("--image", eul_image, "Input PBM")->required()->check(CLI::ExistingFile);
  euler->add_flag("--oracle", eul_oracle, "Also print the component-labeling value");

  // thicken-trace
  std::string tt_image, tt_dump;
  double tt_rho = 10.0;
  int tt_n1 = 1;
  auto* trace = app.add_subcommand("thicken-trace", "Euler number and area along the thickening");
  trace->add_option("--image", tt_image, "Input PBM")->required()->check(CLI::ExistingFile);
  trace->add_option("--rho", tt_rho, "Particle radius (sets the step count)")->capture_default_str();
  trace->add_option("--n1", tt_n1, "Skipped leading steps")->capture_default_str();
  trace->add_option("--dump-steps", tt_dump, "Directory for the intermediate images step_XX.pbm");

  // cade
  std::string cade_image;
  double cade_rho = 10.0;
  int cade_n1 = 1;
  auto* cade_cmd = app.add_subcommand("cade", "CADE of a binary image");
  cade_cmd->add_option("--image", cade_image, "Input PBM")->required()->check(CLI::ExistingFile);
  cade_cmd->add_option("--rho", cade_rho, "Particle radius")->capture_default_str();
  cade_cmd->add_option("--n1", cade_n1, "Skipped leading steps")->capture_default_str();

  // calibrate
  std::vector<double> cal_p = agglo::default_calibration_grid();
  int cal_rho = 10, cal_box = 2400, cal_seeds = 10;
  auto* calibrate = app.add_subcommand("calibrate", "Standard-pattern calibration table (CSV)");
  calibrate->add_option("--p", cal_p, "Volume fractions")->delimiter(',')->capture_default_str();
  calibrate->add_option("--rho", cal_rho, "Disk radius in pixels")->capture_default_str();
  calibrate->add_option("--box", cal_box, "Box size L in pixels")->capture_default_str();
  calibrate->add_option("--seeds", cal_seeds, "Number of seeds, starting at --seed")->capture_default_str();

  // delta / analyze
  std::string del_image, del_calibration;
  double del_rho = 10.0, del_alpha = agglo::kDefaultAlpha;
  int del_seeds = 10;
  auto* delta = app.add_subcommand("delta", "Agglomeration index of a binary image");
  delta->alias("analyze");
  delta->add_option("--image", del_image, "Input PBM")->required()->check(CLI::ExistingFile);
  delta->add_option("--rho", del_rho, "Particle radius")->required();
  delta->add_option("--calibration", del_calibration, "Calibration CSV (default: calibrate on demand)")
      ->check(CLI::ExistingFile);
  delta->add_option("--alpha", del_alpha, "Normalization factor")->capture_default_str();
  delta->add_option("--seeds", del_seeds, "Seeds for on-demand calibration")->capture_default_str();

  // clark-evans
  std::string ce_centers, ce_correction = "none";
  auto* ce = app.add_subcommand("clark-evans", "Clark-Evans index of a centers file");
  ce->add_option("--centers", ce_centers, "Centers CSV")->required()->check(CLI::ExistingFile);
  ce->add_option("--edge-correction", ce_correction, "Edge correction")
      ->check(CLI::IsMember({"none", "donnelly"}))
      ->capture_default_str();

  // euler-curve
  std::string ec_centers;
  double ec_rmin = 1.0, ec_rmax = 30.0, ec_rstep = 1.0;
  auto* ecurve = app.add_subcommand("euler-curve", "Euler number vs disk radius around fixed centers (CSV)");
  ecurve->add_option("--centers", ec_centers, "Centers CSV")->required()->check(CLI::ExistingFile);
  ecurve->add_option("--r-min", ec_rmin, "Smallest radius")->capture_default_str();
  ecurve->add_option("--r-max", ec_rmax, "Largest radius")->capture_default_str();
  ecurve->add_option("--r-step", ec_rstep, "Radius increment")->capture_default_str()->check(CLI::PositiveNumber);

  // experiment
  agglo::ExperimentSpec spec;
  int exp_seeds = 10;
  bool exp_no_curves = false;
  auto* experiment = app.add_subcommand("experiment", "Run the full (p, gamma, seed) grid and write reports");
  experiment->add_option("--p", spec.p_values, "Volume fractions")->delimiter(',')->capture_default_str();
  experiment->add_option("--gamma", spec.gamma_values, "Agglomeration parameters")
      ->delimiter(',')
      ->capture_default_str();
  experiment->add_option("--seeds", exp_seeds, "Number of seeds, starting at --seed")->capture_default_str();
  experiment->add_option("--rho", spec.rho, "Disk radius in pixels")->capture_default_str();
  experiment->add_option("--box", spec.box_size, "Box size L in pixels")->capture_default_str();
  experiment->add_option("--alpha", spec.alpha, "Normalization factor")->capture_default_str();
  experiment->add_flag("--no-curves", exp_no_curves, "Skip the Euler-vs-radius curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (*generate) {
      agglo::GenerationParams params;
      params.gamma_agg = gen_gamma;
      params.target_p = gen_p;
      params.rho = gen_rho;
      params.box_size = gen_box;
      params.seed = g.seed;
      const agglo::Configuration config = agglo::generate_configuration(params);
      emit(g.out, [&](std::ostream& os) { agglo::write_configuration(os, config); });
      if (!gen_image.empty()) agglo::save_image(gen_image, agglo::rasterize(config));
      std::cerr << "particles=" << config.centers.size()
                << " achieved_p=" << agglo::format_real(config.achieved_p) << '\n';
    } else if (*rasterize) {
      if (g.out.empty()) throw std::invalid_argument("rasterize: --out <image.pbm> is required");
      const auto config = agglo::load_configuration(ras_centers);
      agglo::save_image(g.out, agglo::rasterize(config),
                        ras_plain ? agglo::PbmEncoding::kPlain : agglo::PbmEncoding::kRaw);
    } else if (*euler) {
      const auto image = agglo::load_image(eul_image);
      const auto conn = agglo::parse_connectivity(g.connectivity);
      std::cout << agglo::euler_number(image, conn) << '\n';
      if (eul_oracle) std::cout << "oracle=" << agglo::euler_by_components(image, conn) << '\n';
    } else if (*trace) {
      const auto image = agglo::load_image(tt_image);
      const auto opt = g.pipeline(tt_n1);
      const auto schedule =
          agglo::make_schedule(agglo::thickening_steps(tt_rho, image.pixel_size()), opt.variant, opt.n1);
      agglo::StepObserver dump;
      if (!tt_dump.empty()) {
        std::filesystem::create_directories(tt_dump);
        dump = [&](int step, const agglo::BinaryImage& m) {
          char name[32];
          std::snprintf(name, sizeof(name), "step_%02d.pbm", step);
          agglo::save_image(std::filesystem::path(tt_dump) / name, m);
        };
      }
      const auto t = agglo::thicken_trace(image, schedule, opt.connectivity, dump);
      emit(g.out, [&](std::ostream& os) {
        os << "step,element,chi,area\n";
        for (std::size_t i = 0; i < t.chis.size(); ++i) {
          const char* element = i == 0 ? "-"
                                : schedule.steps[i - 1] == agglo::StructuringElement::kSquare ? "II"
                                                                                               : "I";
          os << i << ',' << element << ',' << t.chis[i] << ',' << t.areas[i] << '\n';
        }
      });
    } else if (*cade_cmd) {
      const auto image = agglo::load_image(cade_image);
      const auto v = agglo::image_cade(image, cade_rho, g.pipeline(cade_n1));
      std::cout << v.value << '\n';
    } else if (*calibrate) {
      const auto seeds = seed_range(g.seed, cal_seeds);
      std::vector<agglo::CalibrationEntry> entries;
      for (double p : cal_p) {
        entries.push_back(agglo::calibrate(p, cal_rho, cal_box, seeds, g.pipeline(1), g.workers));
        std::cerr << "calibrated p=" << agglo::format_real(p) << " E_hat=" << entries.back().mean << '\n';
      }
      emit(g.out, [&](std::ostream& os) { agglo::write_calibration(os, entries); });
    } else if (*delta) {
      const auto image = agglo::load_image(del_image);
      std::optional<agglo::CalibrationTable> table;
      if (!del_calibration.empty()) table = agglo::CalibrationTable(agglo::load_calibration(del_calibration));
      agglo::AnalysisOptions opt;
      opt.pipeline = g.pipeline(1);
      opt.alpha = del_alpha;
      opt.auto_seeds = seed_range(g.seed, del_seeds);
      opt.workers = g.workers;
      const auto result = agglo::analyze_image(image, del_rho, table, opt);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      emit(g.out, [&](std::ostream& os) {
        os << "delta=" << agglo::format_real(result.index.delta) << '\n'
           << "cade=" << result.index.cade << '\n'
           << "e_hat_p=" << agglo::format_real(result.index.e_hat_p) << '\n'
           << "p=" << agglo::format_real(result.volume_fraction) << '\n'
           << "alpha=" << agglo::format_real(result.index.alpha) << '\n';
      });
    } else if (*ce) {
      const auto config = agglo::load_configuration(ce_centers);
      const auto corr = ce_correction == "donnelly" ? agglo::EdgeCorrection::kDonnelly
                                                    : agglo::EdgeCorrection::kNone;
      std::cout << agglo::format_real(agglo::clark_evans(config, corr)) << '\n';
    } else if (*ecurve) {
      const auto config = agglo::load_configuration(ec_centers);
      std::vector<double> radii;
      for (int i = 0;; ++i) {
        const double r = ec_rmin + i * ec_rstep;
        if (r > ec_rmax + 1e-9) break;
        radii.push_back(r);
      }
      const auto conn = agglo::parse_connectivity(g.connectivity);
      const auto curve = agglo::euler_radius_curve(config.centers, radii, config.box_size, conn, g.workers);
      const auto n = static_cast<std::int64_t>(config.centers.size());
      emit(g.out, [&](std::ostream& os) {
        os << "r,chi" << (n > 0 ? ",e,a,l" : "") << '\n';
        for (std::size_t i = 0; i < radii.size(); ++i) {
          os << agglo::format_real(radii[i]) << ',' << curve.chi[i];
          if (n > 0) {
            const auto m = agglo::measured_minkowski(
                agglo::rasterize_disks(config.centers, radii[i], config.box_size), n, radii[i], conn);
            os << ',' << agglo::format_real(m.e) << ',' << agglo::format_real(m.a) << ','
               << agglo::format_real(m.l);
          }
          os << '\n';
        }
      });
    } else if (*experiment) {
      if (g.out.empty()) throw std::invalid_argument("experiment: --out <directory> is required");
      spec.seeds = seed_range(g.seed, exp_seeds);
      spec.pipeline = g.pipeline(1);
      spec.workers = g.workers;
      spec.curves = !exp_no_curves;
      const auto bundle = agglo::run_experiment(spec, [](std::size_t done, std::size_t total, const std::string& what) {
        std::cerr << "[" << done << "/" << total << "] " << what << '\n';
      });
      agglo::write_report(bundle, spec, g.out);
      for (const auto& n : bundle.notes) std::cerr << "note: " << n << '\n';
      for (const auto& f : bundle.failures) std::cerr << "failed: " << f << '\n';
      if (!bundle.ok()) return kExitRuntime;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
