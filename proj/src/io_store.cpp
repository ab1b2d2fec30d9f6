#include "agglo/io_store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace agglo {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class Int>
Int parse_int(std::string_view text) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw FormatError("expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return in;
}

// Reads the header row and checks it matches `expected` exactly.
void expect_header(std::istream& in, std::string_view expected) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing header, expected '" + std::string(expected) + "'");
  if (trim(line) != expected)
    throw FormatError("column mismatch: expected '" + std::string(expected) + "', got '" + line + "'");
}

std::vector<std::string_view> fields(const std::string& line, std::size_t count) {
  auto f = split(line, ',');
  if (f.size() != count)
    throw FormatError("expected " + std::to_string(count) + " columns, got " +
                      std::to_string(f.size()) + " in '" + line + "'");
  return f;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_real failed");
  return {buf, ptr};
}

double parse_real(std::string_view text) {
  text = trim(text);
  if (text == "nan") return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw FormatError("expected a real number, got '" + std::string(text) + "'");
  return v;
}

// ---------------------------------------------------------------------------
// Configurations

void write_configuration(std::ostream& out, const Configuration& c) {
  out << "# L=" << c.box_size << " rho=" << c.rho << " gamma=" << format_real(c.gamma_agg)
      << " p=" << format_real(c.target_p) << " seed=" << c.seed
      << " achieved_p=" << format_real(c.achieved_p) << '\n';
  for (const Point& p : c.centers) out << format_real(p.x) << ',' << format_real(p.y) << '\n';
}

Configuration read_configuration(std::istream& in) {
  Configuration c;
  std::map<std::string, std::string, std::less<>> params;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      for (std::string_view token : split(view.substr(1), ' ')) {
        token = trim(token);
        if (token.empty()) continue;
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) throw FormatError("malformed header token '" + std::string(token) + "'");
        params[std::string(token.substr(0, eq))] = std::string(token.substr(eq + 1));
      }
      continue;
    }
    if (params.empty()) throw FormatError("centers file: header line missing before data");
    const auto f = split(view, ',');
    if (f.size() != 2)
      throw FormatError("centers file line " + std::to_string(line_no) + ": expected x,y");
    c.centers.push_back({parse_real(f[0]), parse_real(f[1])});
  }
  for (const char* key : {"L", "rho", "gamma", "p", "seed", "achieved_p"})
    if (!params.contains(key)) throw FormatError(std::string("centers file: header lacks '") + key + "'");
  c.box_size = parse_int<int>(params["L"]);
  c.rho = parse_int<int>(params["rho"]);
  c.gamma_agg = parse_real(params["gamma"]);
  c.target_p = parse_real(params["p"]);
  c.seed = parse_int<std::uint64_t>(params["seed"]);
  c.achieved_p = parse_real(params["achieved_p"]);
  if (c.box_size <= 0 || c.rho <= 0) throw FormatError("centers file: non-positive L or rho");
  for (std::size_t i = 0; i < c.centers.size(); ++i) {
    const Point p = c.centers[i];
    if (!(p.x >= 0.0 && p.x <= c.box_size && p.y >= 0.0 && p.y <= c.box_size))
      throw FormatError("centers file: particle " + std::to_string(i) + " lies outside [0, L]^2");
  }
  return c;
}

void save_configuration(const std::filesystem::path& path, const Configuration& config) {
  auto out = open_out(path);
  write_configuration(out, config);
}

Configuration load_configuration(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_configuration(in);
}

// ---------------------------------------------------------------------------
// Portable bitmaps

void write_pbm(std::ostream& out, const BinaryImage& image, PbmEncoding encoding) {
  const int w = image.width();
  const int h = image.height();
  if (encoding == PbmEncoding::kPlain) {
    out << "P1\n" << w << ' ' << h << '\n';
    for (int y = 0; y < h; ++y) {
      std::string row;
      row.reserve(static_cast<std::size_t>(w));
      for (int x = 0; x < w; ++x) row.push_back(image.get(x, y) ? '1' : '0');
      out << row << '\n';
    }
    return;
  }
  out << "P4\n" << w << ' ' << h << '\n';
  const std::size_t stride = (static_cast<std::size_t>(w) + 7) / 8;
  std::string bytes(stride, '\0');
  for (int y = 0; y < h; ++y) {
    std::fill(bytes.begin(), bytes.end(), '\0');
    for (int x = 0; x < w; ++x)
      if (image.get(x, y)) bytes[static_cast<std::size_t>(x) / 8] |= static_cast<char>(0x80u >> (x % 8));
    out.write(bytes.data(), static_cast<std::streamsize>(stride));
  }
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string pbm_token(std::istream& in) {
  std::string tok;
  int ch = 0;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw FormatError("pbm: truncated header");
  return tok;
}

}  // namespace

BinaryImage read_pbm(std::istream& in) {
  const std::string magic = pbm_token(in);
  if (magic != "P1" && magic != "P4") throw FormatError("pbm: bad magic '" + magic + "'");
  const int w = parse_int<int>(pbm_token(in));
  const int h = parse_int<int>(pbm_token(in));
  if (w < 0 || h < 0) throw FormatError("pbm: negative dimensions");
  BinaryImage image(w, h);
  if (magic == "P1") {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int ch = 0;
        do {
          ch = in.get();
          if (ch == '#')
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
        } while (ch != EOF && ch != '0' && ch != '1');
        if (ch == EOF) throw FormatError("pbm: truncated P1 payload");
        if (ch == '1') image.set(x, y);
      }
    }
    return image;
  }
  // pbm_token consumed exactly one whitespace byte after the height
  const std::size_t stride = (static_cast<std::size_t>(w) + 7) / 8;
  std::string bytes(stride, '\0');
  for (int y = 0; y < h; ++y) {
    in.read(bytes.data(), static_cast<std::streamsize>(stride));
    if (static_cast<std::size_t>(in.gcount()) != stride) throw FormatError("pbm: truncated P4 payload");
    for (int x = 0; x < w; ++x)
      if (static_cast<unsigned char>(bytes[static_cast<std::size_t>(x) / 8]) & (0x80u >> (x % 8)))
        image.set(x, y);
  }
  return image;
}

void save_image(const std::filesystem::path& path, const BinaryImage& image, PbmEncoding encoding) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  write_pbm(out, image, encoding);
}

BinaryImage load_image(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  return read_pbm(in);
}

// ---------------------------------------------------------------------------
// Tables

namespace {
constexpr const char* kCalibrationHeader = "p,rho,box_size,n_seeds,mean,min,max,stddev,seeds,cades";

template <class T, class Fmt>
std::string join(const std::vector<T>& values, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += fmt(values[i]);
  }
  return out;
}
}  // namespace

void write_calibration(std::ostream& out, const std::vector<CalibrationEntry>& entries) {
  out << kCalibrationHeader << '\n';
  for (const auto& e : entries) {
    out << format_real(e.p) << ',' << e.rho << ',' << e.box_size << ',' << e.seeds.size() << ','
        << format_real(e.mean) << ',' << format_real(e.min) << ',' << format_real(e.max) << ','
        << (std::isnan(e.stddev) ? std::string("nan") : format_real(e.stddev)) << ','
        << join(e.seeds, [](std::uint64_t s) { return std::to_string(s); }) << ','
        << join(e.cades, [](std::int64_t v) { return std::to_string(v); }) << '\n';
  }
}

std::vector<CalibrationEntry> read_calibration(std::istream& in) {
  expect_header(in, kCalibrationHeader);
  std::vector<CalibrationEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = fields(line, 10);
    std::vector<std::uint64_t> seeds;
    std::vector<std::int64_t> cades;
    for (auto s : split(f[8], ';')) seeds.push_back(parse_int<std::uint64_t>(s));
    for (auto s : split(f[9], ';')) cades.push_back(parse_int<std::int64_t>(s));
    if (seeds.size() != parse_int<std::size_t>(f[3]))
      throw FormatError("calibration: n_seeds disagrees with the seed list");
    CalibrationEntry e = summarize_calibration(parse_real(f[0]), parse_int<int>(f[1]),
                                               parse_int<int>(f[2]), std::move(seeds), std::move(cades));
    // stored statistics are authoritative; recomputed ones must agree
    if (e.mean != parse_real(f[4])) throw FormatError("calibration: mean disagrees with the CADE list");
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_calibration(const std::filesystem::path& path, const std::vector<CalibrationEntry>& entries) {
  auto out = open_out(path);
  write_calibration(out, entries);
}

std::vector<CalibrationEntry> load_calibration(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_calibration(in);
}

void write_results(std::ostream& out, const std::vector<RunRecord>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << format_real(r.p) << ',' << format_real(r.gamma) << ',' << r.seed << ',' << r.cade << ','
        << format_real(r.e_hat_p) << ',' << format_real(r.delta) << ',' << format_real(r.clark_evans)
        << ',' << r.n_particles << ',' << format_real(r.achieved_p) << '\n';
  }
}

std::vector<RunRecord> read_results(std::istream& in) {
  expect_header(in, kResultsHeader);
  std::vector<RunRecord> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = fields(line, 9);
    RunRecord r;
    r.p = parse_real(f[0]);
    r.gamma = parse_real(f[1]);
    r.seed = parse_int<std::uint64_t>(f[2]);
    r.cade = parse_int<std::int64_t>(f[3]);
    r.e_hat_p = parse_real(f[4]);
    r.delta = parse_real(f[5]);
    r.clark_evans = parse_real(f[6]);
    r.n_particles = parse_int<std::int64_t>(f[7]);
    r.achieved_p = parse_real(f[8]);
    rows.push_back(r);
  }
  return rows;
}

void save_results(const std::filesystem::path& path, const std::vector<RunRecord>& rows) {
  auto out = open_out(path);
  write_results(out, rows);
}

std::vector<RunRecord> load_results(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_results(in);
}

void write_summary(std::ostream& out, const std::vector<SummaryCell>& cells) {
  out << kSummaryHeader << '\n';
  for (const auto& c : cells)
    out << format_real(c.p) << ',' << format_real(c.gamma) << ',' << format_real(c.avg) << ','
        << format_real(c.max) << ',' << format_real(c.min) << '\n';
}

std::vector<SummaryCell> read_summary(std::istream& in) {
  expect_header(in, kSummaryHeader);
  std::vector<SummaryCell> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = fields(line, 5);
    cells.push_back({parse_real(f[0]), parse_real(f[1]), parse_real(f[2]), parse_real(f[3]),
                     parse_real(f[4])});
  }
  return cells;
}

void save_summary(const std::filesystem::path& path, const std::vector<SummaryCell>& cells) {
  auto out = open_out(path);
  write_summary(out, cells);
}

void append_manifest(const std::filesystem::path& path, const std::string& json_line) {
  auto out = open_out(path, std::ios::out | std::ios::app);
  out << json_line << '\n';
}

}  // namespace agglo
