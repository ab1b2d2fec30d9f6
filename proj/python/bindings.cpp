#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "agglo/cade.hpp"
#include "agglo/experiment.hpp"
#include "agglo/genesis.hpp"
#include "agglo/io_store.hpp"
#include "agglo/morphology.hpp"
#include "agglo/pointstats.hpp"
#include "agglo/raster.hpp"
#include "agglo/topology.hpp"

namespace py = pybind11;
using namespace agglo;

namespace {

using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

// Images cross the boundary as 2-D (height, width) arrays; nonzero = foreground.
BinaryImage to_image(const ImageArray& arr) {
  if (arr.ndim() != 2) throw py::value_error("image must be a 2-D array");
  const auto h = static_cast<int>(arr.shape(0));
  const auto w = static_cast<int>(arr.shape(1));
  BinaryImage img(w, h);
  auto v = arr.unchecked<2>();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (v(y, x)) img.set(x, y);
  return img;
}

py::array_t<bool> to_array(const BinaryImage& img) {
  py::array_t<bool> out({img.height(), img.width()});
  auto v = out.mutable_unchecked<2>();
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) v(y, x) = img.get(x, y);
  return out;
}

std::vector<Point> to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2 || arr.shape(1) != 2) throw py::value_error("centers must have shape (n, 2)");
  std::vector<Point> pts(static_cast<std::size_t>(arr.shape(0)));
  auto v = arr.unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {v(i, 0), v(i, 1)};
  return pts;
}

py::array_t<double> points_array(const std::vector<Point>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    v(i, 0) = pts[i].x;
    v(i, 1) = pts[i].y;
  }
  return out;
}

PipelineOptions pipeline(const std::string& schedule_name, int n1, const std::string& connectivity) {
  PipelineOptions o;
  o.variant = parse_schedule_variant(schedule_name);
  o.n1 = n1;
  o.connectivity = parse_connectivity(connectivity);
  return o;
}

}  // namespace

PYBIND11_MODULE(_agglo, m) {
  m.doc() = "Agglomeration analysis core";
  m.attr("__version__") = kToolVersion;

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<>())
      .def_property(
          "centers", [](const Configuration& c) { return points_array(c.centers); },
          [](Configuration& c, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            c.centers = to_points(a);
          })
      .def_readwrite("rho", &Configuration::rho)
      .def_readwrite("box_size", &Configuration::box_size)
      .def_readwrite("gamma_agg", &Configuration::gamma_agg)
      .def_readwrite("target_p", &Configuration::target_p)
      .def_readwrite("seed", &Configuration::seed)
      .def_readwrite("achieved_p", &Configuration::achieved_p)
      .def("__len__", [](const Configuration& c) { return c.centers.size(); })
      .def("__repr__", [](const Configuration& c) {
        return "<Configuration n=" + std::to_string(c.centers.size()) + " L=" + std::to_string(c.box_size) +
               " rho=" + std::to_string(c.rho) + " gamma=" + format_real(c.gamma_agg) +
               " p=" + format_real(c.achieved_p) + ">";
      });

  py::class_<CalibrationEntry>(m, "CalibrationEntry")
      .def_readonly("p", &CalibrationEntry::p)
      .def_readonly("rho", &CalibrationEntry::rho)
      .def_readonly("box_size", &CalibrationEntry::box_size)
      .def_readonly("seeds", &CalibrationEntry::seeds)
      .def_readonly("cades", &CalibrationEntry::cades)
      .def_readonly("mean", &CalibrationEntry::mean)
      .def_readonly("min", &CalibrationEntry::min)
      .def_readonly("max", &CalibrationEntry::max)
      .def_readonly("stddev", &CalibrationEntry::stddev)
      .def("__repr__", [](const CalibrationEntry& e) {
        return "<CalibrationEntry p=" + format_real(e.p) + " mean=" + format_real(e.mean) +
               " seeds=" + std::to_string(e.seeds.size()) + ">";
      });

  m.def(
      "generate_configuration",
      [](double gamma, double p, int rho, int box_size, std::uint64_t seed) {
        GenerationParams g;
        g.gamma_agg = gamma;
        g.target_p = p;
        g.rho = rho;
        g.box_size = box_size;
        g.seed = seed;
        py::gil_scoped_release release;
        return generate_configuration(g);
      },
      py::arg("gamma"), py::arg("p"), py::arg("rho") = 10, py::arg("box_size") = 2400, py::arg("seed") = 1);

  m.def("rasterize", [](const Configuration& c) { return to_array(rasterize(c)); }, py::arg("config"));
  m.def("volume_fraction", [](const ImageArray& a) { return volume_fraction(to_image(a)); }, py::arg("image"));

  m.def(
      "euler_number",
      [](const ImageArray& a, const std::string& conn) { return euler_number(to_image(a), parse_connectivity(conn)); },
      py::arg("image"), py::arg("connectivity") = "8-4");
  m.def(
      "euler_by_components",
      [](const ImageArray& a, const std::string& conn) {
        return euler_by_components(to_image(a), parse_connectivity(conn));
      },
      py::arg("image"), py::arg("connectivity") = "8-4");

  m.def(
      "dilate",
      [](const ImageArray& a, const std::string& element) {
        StructuringElement e;
        if (element == "cross" || element == "I") e = StructuringElement::kCross;
        else if (element == "square" || element == "II") e = StructuringElement::kSquare;
        else throw py::value_error("element must be 'cross' or 'square'");
        return to_array(dilate(to_image(a), e));
      },
      py::arg("image"), py::arg("element"));

  m.def(
      "schedule",
      [](int n2, const std::string& variant) {
        std::vector<std::string> out;
        for (auto e : make_schedule(n2, parse_schedule_variant(variant)).steps)
          out.emplace_back(e == StructuringElement::kSquare ? "II" : "I");
        return out;
      },
      py::arg("n2") = 10, py::arg("variant") = "count-matched");

  m.def(
      "thicken_trace",
      [](const ImageArray& a, int n2, const std::string& variant, const std::string& conn) {
        const auto t = thicken_trace(to_image(a), make_schedule(n2, parse_schedule_variant(variant)),
                                     parse_connectivity(conn));
        return py::make_tuple(t.chis, t.areas);
      },
      py::arg("image"), py::arg("n2") = 10, py::arg("schedule") = "count-matched",
      py::arg("connectivity") = "8-4", "Returns (chis, areas) for M(0)..M(n2).");

  m.def(
      "cade",
      [](const std::vector<std::int64_t>& chis, int n1, int n2) {
        EulerTrace t;
        t.chis = chis;
        t.areas.assign(chis.size(), 0);
        return cade(t, n1, n2).value;
      },
      py::arg("chis"), py::arg("n1"), py::arg("n2"));

  m.def(
      "image_cade",
      [](const ImageArray& a, double rho, const std::string& schedule, int n1, const std::string& conn) {
        return image_cade(to_image(a), rho, pipeline(schedule, n1, conn)).value;
      },
      py::arg("image"), py::arg("rho"), py::arg("schedule") = "count-matched", py::arg("n1") = 1,
      py::arg("connectivity") = "8-4");

  m.def(
      "calibrate",
      [](double p, int rho, int box_size, const std::vector<std::uint64_t>& seeds, int workers) {
        py::gil_scoped_release release;
        return calibrate(p, rho, box_size, seeds, {}, workers);
      },
      py::arg("p"), py::arg("rho") = 10, py::arg("box_size") = 2400,
      py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, py::arg("workers") = 1);

  m.def(
      "delta_agg",
      [](std::int64_t value, double e_hat, double alpha) {
        CadeValue v;
        v.value = value;
        return delta_agg(v, e_hat, alpha).delta;
      },
      py::arg("cade"), py::arg("e_hat"), py::arg("alpha") = kDefaultAlpha);

  m.def(
      "analyze_image",
      [](const ImageArray& a, double rho, const std::optional<std::vector<CalibrationEntry>>& calibration,
         double alpha, const std::vector<std::uint64_t>& seeds, const std::string& schedule, int n1,
         const std::string& conn) {
        const BinaryImage img = to_image(a);
        AnalysisOptions o;
        o.alpha = alpha;
        o.auto_seeds = seeds;
        o.pipeline = pipeline(schedule, n1, conn);
        std::optional<CalibrationTable> table;
        if (calibration) table = CalibrationTable(*calibration);
        AnalysisResult r;
        {
          py::gil_scoped_release release;
          r = analyze_image(img, rho, table, o);
        }
        py::dict d;
        d["delta"] = r.index.delta;
        d["cade"] = r.cade.value;
        d["e_hat_p"] = r.index.e_hat_p;
        d["volume_fraction"] = r.volume_fraction;
        d["alpha"] = r.index.alpha;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("image"), py::arg("rho"), py::arg("calibration") = py::none(), py::arg("alpha") = kDefaultAlpha,
      py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
      py::arg("schedule") = "count-matched", py::arg("n1") = 1, py::arg("connectivity") = "8-4");

  m.def(
      "clark_evans",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& centers, double box_size,
         const std::string& correction) {
        EdgeCorrection c;
        if (correction == "none") c = EdgeCorrection::kNone;
        else if (correction == "donnelly") c = EdgeCorrection::kDonnelly;
        else throw py::value_error("edge_correction must be 'none' or 'donnelly'");
        return clark_evans(to_points(centers), box_size, c);
      },
      py::arg("centers"), py::arg("box_size"), py::arg("edge_correction") = "none");

  m.def(
      "minkowski_reference",
      [](double x) {
        const auto t = minkowski_reference(x);
        return py::make_tuple(t.e, t.a, t.l);
      },
      py::arg("x"), "Returns (e, a, l) of the Boolean model at x = lambda pi r^2.");

  m.def(
      "euler_radius_curve",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& centers,
         const std::vector<double>& radii, int box_size, const std::string& conn, int workers) {
        const auto pts = to_points(centers);
        py::gil_scoped_release release;
        return euler_radius_curve(pts, radii, box_size, parse_connectivity(conn), workers).chi;
      },
      py::arg("centers"), py::arg("radii"), py::arg("box_size"), py::arg("connectivity") = "8-4",
      py::arg("workers") = 1);

  m.def(
      "run_experiment",
      [](const std::vector<double>& p, const std::vector<double>& gamma, const std::vector<std::uint64_t>& seeds,
         int rho, int box_size, double alpha, int workers, const std::optional<std::filesystem::path>& out) {
        ExperimentSpec spec;
        spec.p_values = p;
        spec.gamma_values = gamma;
        spec.seeds = seeds;
        spec.rho = rho;
        spec.box_size = box_size;
        spec.alpha = alpha;
        spec.workers = workers;
        spec.curves = out.has_value();
        ReportBundle b;
        {
          py::gil_scoped_release release;
          b = run_experiment(spec);
          if (out) write_report(b, spec, *out);
        }
        py::list runs;
        for (const auto& r : b.runs) {
          py::dict d;
          d["p"] = r.p;
          d["gamma"] = r.gamma;
          d["seed"] = r.seed;
          d["cade"] = r.cade;
          d["e_hat_p"] = r.e_hat_p;
          d["delta"] = r.delta;
          d["clark_evans"] = r.clark_evans;
          d["n_particles"] = r.n_particles;
          d["achieved_p"] = r.achieved_p;
          runs.append(d);
        }
        py::dict result;
        result["runs"] = runs;
        result["calibration"] = b.calibration;
        result["failures"] = b.failures;
        result["notes"] = b.notes;
        return result;
      },
      py::arg("p") = std::vector<double>{0.1, 0.2, 0.3, 0.4},
      py::arg("gamma") = std::vector<double>{0.0, 0.3, 0.6, 0.9},
      py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, py::arg("rho") = 10,
      py::arg("box_size") = 2400, py::arg("alpha") = kDefaultAlpha, py::arg("workers") = 1,
      py::arg("out") = py::none());

  m.def("load_image", [](const std::filesystem::path& p) { return to_array(load_image(p)); }, py::arg("path"));
  m.def(
      "save_image",
      [](const std::filesystem::path& p, const ImageArray& a, bool plain) {
        save_image(p, to_image(a), plain ? PbmEncoding::kPlain : PbmEncoding::kRaw);
      },
      py::arg("path"), py::arg("image"), py::arg("plain") = false);
  m.def("load_configuration", &load_configuration, py::arg("path"));
  m.def("save_configuration", &save_configuration, py::arg("path"), py::arg("config"));
  m.def("load_calibration", &load_calibration, py::arg("path"));
  m.def("save_calibration", &save_calibration, py::arg("path"), py::arg("entries"));
}
