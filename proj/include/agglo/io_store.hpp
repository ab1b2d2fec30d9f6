#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "agglo/binary_image.hpp"
#include "agglo/cade.hpp"
#include "agglo/genesis.hpp"

namespace agglo {

/// Malformed or inconsistent file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
std::string format_real(double v);
double parse_real(std::string_view text);

// Centers file:
//   # L=<int> rho=<int> gamma=<real> p=<real> seed=<int> achieved_p=<real>
//   x,y            (one row per particle, insertion order)
void write_configuration(std::ostream& out, const Configuration& config);
Configuration read_configuration(std::istream& in);
void save_configuration(const std::filesystem::path& path, const Configuration& config);
Configuration load_configuration(const std::filesystem::path& path);

enum class PbmEncoding : std::uint8_t { kPlain /*P1*/, kRaw /*P4*/ };

void write_pbm(std::ostream& out, const BinaryImage& image, PbmEncoding encoding = PbmEncoding::kRaw);
BinaryImage read_pbm(std::istream& in);
void save_image(const std::filesystem::path& path, const BinaryImage& image,
                PbmEncoding encoding = PbmEncoding::kRaw);
BinaryImage load_image(const std::filesystem::path& path);

// Calibration CSV: p,rho,box_size,n_seeds,mean,min,max,stddev,seeds,cades
// (seeds and cades are ';'-separated lists).
void write_calibration(std::ostream& out, const std::vector<CalibrationEntry>& entries);
std::vector<CalibrationEntry> read_calibration(std::istream& in);
void save_calibration(const std::filesystem::path& path, const std::vector<CalibrationEntry>& entries);
std::vector<CalibrationEntry> load_calibration(const std::filesystem::path& path);

/// One (p, gamma, seed) run of an experiment.
struct RunRecord {
  double p = 0.0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::int64_t cade = 0;
  double e_hat_p = 0.0;
  double delta = 0.0;
  double clark_evans = 0.0;
  std::int64_t n_particles = 0;
  double achieved_p = 0.0;
};

inline constexpr const char* kResultsHeader =
    "p,gamma,seed,cade,e_hat_p,delta,clark_evans,n_particles,achieved_p";

void write_results(std::ostream& out, const std::vector<RunRecord>& rows);
std::vector<RunRecord> read_results(std::istream& in);
void save_results(const std::filesystem::path& path, const std::vector<RunRecord>& rows);
std::vector<RunRecord> load_results(const std::filesystem::path& path);

/// avg/max/min of one metric over the seeds of a (p, gamma) cell.
struct SummaryCell {
  double p = 0.0;
  double gamma = 0.0;
  double avg = 0.0;
  double max = 0.0;
  double min = 0.0;
};

inline constexpr const char* kSummaryHeader = "p,gamma,avg,max,min";

void write_summary(std::ostream& out, const std::vector<SummaryCell>& cells);
std::vector<SummaryCell> read_summary(std::istream& in);
void save_summary(const std::filesystem::path& path, const std::vector<SummaryCell>& cells);

/// Appends one JSON line to `path` (created if missing).
void append_manifest(const std::filesystem::path& path, const std::string& json_line);

}  // namespace agglo
