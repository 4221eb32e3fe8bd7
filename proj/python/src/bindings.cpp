#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "imitate/io.hpp"
#include "imitate/pipeline.hpp"

namespace py = pybind11;
using namespace imitate;

namespace {

std::vector<Primitive> parse_all(const std::vector<std::string>& names) {
  std::vector<Primitive> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(primitive_from_string(n));
  return out;
}

std::vector<std::string> names_of(std::span<const Primitive> ps) {
  std::vector<std::string> out;
  out.reserve(ps.size());
  for (Primitive p : ps) out.emplace_back(to_string(p));
  return out;
}

std::vector<Vec2> cloud_of(const std::vector<std::pair<double, double>>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (auto [x, y] : pts) out.push_back({x, y});
  return out;
}

}  // namespace

PYBIND11_MODULE(_imitate, m) {
  m.doc() = "Key-action extraction, pose estimation, object binding and simulated execution";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SelectionError>(m, "SelectionError", PyExc_RuntimeError);

  std::vector<std::string> prims;
  for (Primitive p : kAllPrimitives) prims.emplace_back(to_string(p));
  m.attr("PRIMITIVES") = prims;

  m.def(
      "window_filter",
      [](const std::vector<std::string>& frames, std::size_t w) {
        return names_of(window_filter(PrimitiveStream(parse_all(frames)), WindowWidth(w)).keys());
      },
      py::arg("frames"), py::arg("w") = kDefaultWindowWidth);

  m.def(
      "synthesize_stream",
      [](const std::vector<std::string>& keys, std::size_t frames_per_key, double noise, std::uint64_t seed) {
        return names_of(synthesize_stream(KeySequence(parse_all(keys)), frames_per_key, noise, seed).frames());
      },
      py::arg("keys"), py::arg("frames_per_key"), py::arg("noise"), py::arg("seed"));

  m.def(
      "centroid",
      [](const std::vector<std::pair<double, double>>& pts) {
        const Vec2 c = centroid(cloud_of(pts));
        return std::pair{c.x, c.y};
      },
      py::arg("points"));

  m.def(
      "principal_angle",
      [](const std::vector<std::pair<double, double>>& pts) {
        const PrincipalAxis a = principal_angle(cloud_of(pts));
        return std::pair{a.theta, a.degenerate};
      },
      py::arg("points"), "Major-axis angle in [0, pi) and the degenerate flag.");

  py::class_<ObjectPose>(m, "Pose")
      .def_readonly("x", &ObjectPose::x)
      .def_readonly("y", &ObjectPose::y)
      .def_readonly("theta", &ObjectPose::theta)
      .def_readonly("cls", &ObjectPose::c)
      .def_readonly("degenerate", &ObjectPose::degenerate)
      .def("__repr__", [](const ObjectPose& p) {
        return "Pose(" + p.c + ", x=" + std::to_string(p.x) + ", y=" + std::to_string(p.y) +
               ", theta=" + std::to_string(p.theta) + ")";
      });

  m.def(
      "estimate_pose",
      [](const std::string& cls, const std::vector<std::pair<int, int>>& pixels) {
        std::vector<Pixel> px;
        px.reserve(pixels.size());
        for (auto [x, y] : pixels) px.push_back({x, y});
        return estimate_pose(Mask(cls, std::move(px)));
      },
      py::arg("cls"), py::arg("pixels"));

  py::class_<CooccurrenceModel>(m, "Model")
      .def_static(
          "load",
          [](const std::filesystem::path& corpus, const std::filesystem::path& lexicon) {
            return build_model(read_corpus(corpus), read_lexicon(lexicon));
          },
          py::arg("corpus"), py::arg("lexicon"))
      .def(
          "count", [](const CooccurrenceModel& m, const std::string& a, const std::string& o) {
            return m.count(primitive_from_string(a), o);
          },
          py::arg("action"), py::arg("object"))
      .def(
          "probability",
          [](const CooccurrenceModel& m, const std::string& o, const std::string& a) {
            return conditional_probability(m, o, primitive_from_string(a));
          },
          py::arg("object"), py::arg("action"))
      .def(
          "select",
          [](const CooccurrenceModel& m, const std::string& a, const std::set<std::string>& detected) {
            return select_single_object(m, primitive_from_string(a), detected).object;
          },
          py::arg("action"), py::arg("detected"))
      .def(
          "select_pair",
          [](const CooccurrenceModel& m, const std::string& a, const std::set<std::string>& detected) {
            const PairSelection s = select_object_pair(m, primitive_from_string(a), detected);
            return std::pair{s.primary, s.target};
          },
          py::arg("action"), py::arg("detected"))
      .def_property_readonly("sentences", &CooccurrenceModel::sentence_count);

  py::class_<TaskResult>(m, "BenchResult")
      .def_readonly("name", &TaskResult::name)
      .def_readonly("trials", &TaskResult::trials)
      .def_readonly("successes", &TaskResult::successes)
      .def_readonly("keys_exact", &TaskResult::keys_exact)
      .def_readonly("failures", &TaskResult::failures)
      .def_property_readonly("success_rate", &TaskResult::success_rate);

  m.def(
      "run_bench",
      [](const std::filesystem::path& fixtures, const CooccurrenceModel& model, std::size_t trials, double noise,
         std::uint64_t seed, std::size_t w) {
        BenchConfig cfg;
        cfg.trials = trials;
        cfg.noise = noise;
        cfg.seed = seed;
        cfg.window_width = WindowWidth(w).value;
        return run_bench(load_bench_tasks(fixtures), model, cfg);
      },
      py::arg("fixtures"), py::arg("model"), py::arg("trials") = 10, py::arg("noise") = 0.0, py::arg("seed") = 0,
      py::arg("w") = kDefaultWindowWidth);
}
