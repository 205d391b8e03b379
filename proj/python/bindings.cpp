#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "lacircle/bench.hpp"
#include "lacircle/config.hpp"
#include "lacircle/detector.hpp"
#include "lacircle/errors.hpp"
#include "lacircle/synth.hpp"

namespace py = pybind11;
using namespace lacircle;

namespace {

using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const ImageArray& arr) {
    if (arr.ndim() != 2) throw py::value_error("image must be a 2-D array (height, width)");
    const auto h = static_cast<int>(arr.shape(0));
    const auto w = static_cast<int>(arr.shape(1));
    const auto* data = arr.data();
    return GrayImage(w, h, std::vector<std::uint8_t>(data, data + arr.size()));
}

py::array_t<std::uint8_t> from_image(const GrayImage& img) {
    py::array_t<std::uint8_t> out({img.height(), img.width()});
    std::copy(img.data().begin(), img.data().end(), out.mutable_data());
    return out;
}

EdgeMap to_edges(const py::array& mask) {
    const auto arr = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(mask);
    if (!arr || arr.ndim() != 2) throw py::value_error("edge mask must be a 2-D array");
    const auto* data = arr.data();
    return EdgeMap(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)),
                   std::vector<std::uint8_t>(data, data + arr.size()));
}

py::array_t<bool> from_edges(const EdgeMap& e) {
    py::array_t<bool> out({e.height(), e.width()});
    auto* dst = out.mutable_data();
    for (std::size_t i = 0; i < e.bits().size(); ++i) dst[i] = e.bits()[i] != 0;
    return out;
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_lacircle, m) {
    m.doc() = "Multiple-circle detection with a learning automaton";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", base);
    py::register_exception<FormatError>(m, "FormatError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<CollinearPoints>(m, "CollinearPoints", base);
    py::register_exception<PlacementFailure>(m, "PlacementFailure", base);
    auto detection = py::register_exception<DetectionError>(m, "DetectionError", base);
    py::register_exception<TooFewEdgePoints>(m, "TooFewEdgePoints", detection);
    py::register_exception<NoFeasibleActions>(m, "NoFeasibleActions", detection);

    py::class_<Circle>(m, "Circle")
        .def(py::init<double, double, double>(), py::arg("x0"), py::arg("y0"), py::arg("r"))
        .def_readwrite("x0", &Circle::x0)
        .def_readwrite("y0", &Circle::y0)
        .def_readwrite("r", &Circle::r)
        .def(py::self == py::self)
        .def("__repr__", [](const Circle& c) {
            return "Circle(x0=" + std::to_string(c.x0) + ", y0=" + std::to_string(c.y0) +
                   ", r=" + std::to_string(c.r) + ")";
        });

    py::class_<EdgeConfig>(m, "EdgeConfig")
        .def(py::init<>())
        .def_readwrite("blur_sigma", &EdgeConfig::blur_sigma)
        .def_readwrite("low_thresh", &EdgeConfig::low_thresh)
        .def_readwrite("high_thresh", &EdgeConfig::high_thresh);

    py::class_<DetectorConfig>(m, "DetectorConfig")
        .def(py::init<>())
        .def_readwrite("edges", &DetectorConfig::edges)
        .def_readwrite("fraction", &DetectorConfig::fraction)
        .def_readwrite("r_min", &DetectorConfig::r_min)
        .def_readwrite("r_max", &DetectorConfig::r_max)
        .def_readwrite("sensitivity", &DetectorConfig::sensitivity)
        .def_readwrite("theta", &DetectorConfig::theta)
        .def_readwrite("k_max", &DetectorConfig::k_max)
        .def_readwrite("k_cap", &DetectorConfig::k_cap)
        .def_readwrite("p_stop", &DetectorConfig::p_stop)
        .def_readwrite("pr_divisor", &DetectorConfig::pr_divisor)
        .def_readwrite("action_cap", &DetectorConfig::action_cap)
        .def_readwrite("max_clip_fraction", &DetectorConfig::max_clip_fraction)
        .def_readwrite("beta_accept", &DetectorConfig::beta_accept)
        .def_readwrite("beta_min_solution", &DetectorConfig::beta_min_solution)
        .def("es_threshold", &DetectorConfig::es_threshold)
        .def("validate", [](const DetectorConfig& c) { validate(c); })
        .def_static(
            "from_dict",
            [](const py::dict& d) {
                DetectorConfig cfg;
                MetricConfig unused;
                const auto text = py::module_::import("json").attr("dumps")(d).cast<std::string>();
                apply_detector_json(nlohmann::json::parse(text), cfg, unused);
                return cfg;
            },
            "Builds a config from flat keys named like the CLI flags (\"r-min\", ...).");

    py::class_<DetectedCircle>(m, "DetectedCircle")
        .def_readonly("circle", &DetectedCircle::circle)
        .def_readonly("probability", &DetectedCircle::probability)
        .def_readonly("beta", &DetectedCircle::beta)
        .def_readonly("rank", &DetectedCircle::rank);

    py::class_<DetectionResult>(m, "DetectionResult")
        .def_readonly("circles", &DetectionResult::circles)
        .def_readonly("n_actions", &DetectionResult::n_actions)
        .def_readonly("iterations", &DetectionResult::iterations)
        .def_readonly("seed", &DetectionResult::seed)
        .def_readonly("elapsed_s", &DetectionResult::elapsed_s)
        .def(
            "to_dict",
            [](const DetectionResult& r, bool timing) { return to_python(to_json(r, timing)); },
            py::arg("include_timing") = true);

    m.def("load_gray_image", [](const std::filesystem::path& p) { return from_image(load_gray_image(p)); },
          py::arg("path"));

    m.def(
        "detect_edges",
        [](const ImageArray& img, const EdgeConfig& cfg) { return from_edges(detect_edges(to_image(img), cfg)); },
        py::arg("image"), py::arg("config") = EdgeConfig{},
        "Canny edge mask (bool array) of a uint8 image.");

    m.def(
        "detect",
        [](const py::array& input, const DetectorConfig& cfg, std::uint64_t seed) {
            if (input.dtype().is(py::dtype::of<bool>())) {
                const auto edges = to_edges(input);
                py::gil_scoped_release release;
                return detect(edges, cfg, seed);
            }
            const auto img = to_image(ImageArray::ensure(input));
            py::gil_scoped_release release;
            return detect(img, cfg, seed);
        },
        py::arg("image"), py::arg("config") = DetectorConfig{}, py::arg("seed") = 0,
        "Detects circles in a uint8 image, or in a bool edge mask.");

    m.def(
        "circle_from_triplet",
        [](std::pair<int, int> a, std::pair<int, int> b, std::pair<int, int> c) {
            return circle_through({a.first, a.second}, {b.first, b.second}, {c.first, c.second}).circle;
        },
        py::arg("p_i"), py::arg("p_j"), py::arg("p_k"));

    m.def(
        "rasterize_circle",
        [](const Circle& c, int width, int height) {
            const auto s = rasterize_circle(c, width, height);
            std::vector<std::pair<int, int>> pts;
            for (auto p : s.points) pts.emplace_back(p.x, p.y);
            return py::make_tuple(pts, s.clipped);
        },
        py::arg("circle"), py::arg("width"), py::arg("height"),
        "Returns (points, clipped) for the midpoint rasterization.");

    m.def("distinctiveness", &distinctiveness, py::arg("a"), py::arg("b"));
    m.def("distinctiveness_threshold", &distinctiveness_threshold, py::arg("r_min"), py::arg("r_max"),
          py::arg("sensitivity"));

    m.def(
        "lri_update",
        [](std::vector<double> p, std::size_t selected, double beta, double theta) {
            ProbabilityVector pv{std::move(p), 0};
            return lri_update(pv, selected, beta, theta).p;
        },
        py::arg("p"), py::arg("selected"), py::arg("beta"), py::arg("theta"));
    m.def(
        "select_action",
        [](const std::vector<double>& p, double z) { return select_action(p, z); }, py::arg("p"),
        py::arg("z"));

    m.def(
        "generate_scene",
        [](int width, int height, int n_circles, int r_lo, int r_hi, double noise, std::uint64_t seed,
           double min_separation, std::vector<Circle> circles) {
            SceneSpec spec;
            spec.width = width;
            spec.height = height;
            spec.n_circles = n_circles;
            spec.r_lo = r_lo;
            spec.r_hi = r_hi;
            spec.noise = noise;
            spec.seed = seed;
            spec.min_separation = min_separation;
            for (const auto& c : circles) spec.circles.push_back({c, false});
            const auto scene = generate_scene(spec);
            return py::make_tuple(from_image(scene.image), scene.truth());
        },
        py::arg("width") = 256, py::arg("height") = 256, py::arg("n_circles") = 1, py::arg("r_lo") = 20,
        py::arg("r_hi") = 80, py::arg("noise") = 0.0, py::arg("seed") = 0,
        py::arg("min_separation") = 0.0, py::arg("circles") = std::vector<Circle>{},
        "Returns (image, true circles).");

    m.def(
        "add_salt_pepper",
        [](const ImageArray& img, double level, std::uint64_t seed) {
            Rng rng(seed);
            return from_image(add_salt_pepper(to_image(img), level, rng));
        },
        py::arg("image"), py::arg("level"), py::arg("seed") = 0);

    m.def(
        "error_score",
        [](const Circle& d, const Circle& t, double eta, double mu) {
            return error_score(d, t, {eta, mu, 2.0});
        },
        py::arg("detected"), py::arg("truth"), py::arg("eta") = 0.05, py::arg("mu") = 0.1);

    m.def(
        "match_circles",
        [](const std::vector<Circle>& detected, const std::vector<Circle>& truth, double es_fail) {
            MetricConfig metric;
            metric.es_fail = es_fail;
            const auto r = match_circles(detected, truth, metric);
            return py::make_tuple(r.me, r.es, r.match);
        },
        py::arg("detected"), py::arg("truth"), py::arg("es_fail") = 2.0,
        "Returns (ME, Es per true circle, matched detection index or -1).");

    m.def(
        "success_rate", [](const std::vector<double>& me) { return success_rate(me); },
        py::arg("me_values"));

    m.def(
        "run_benchmark",
        [](const std::filesystem::path& suite, std::size_t trials, std::uint64_t base_seed, bool timing) {
            const auto s = load_suite(suite);
            BenchReport report;
            {
                py::gil_scoped_release release;
                report = run_benchmark(s, trials, base_seed);
            }
            return to_python(to_json(report, timing));
        },
        py::arg("suite"), py::arg("trials") = 35, py::arg("base_seed") = 0, py::arg("include_timing") = false,
        "Runs a suite file and returns the report as a dict.");
}
