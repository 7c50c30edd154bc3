#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pascaltri/cloud.hpp"
#include "pascaltri/corpus.hpp"
#include "pascaltri/error.hpp"
#include "pascaltri/experiment.hpp"
#include "pascaltri/image_io.hpp"
#include "pascaltri/invariants.hpp"
#include "pascaltri/moments.hpp"
#include "pascaltri/radon.hpp"
#include "pascaltri/reconstruction.hpp"
#include "pascaltri/serialize.hpp"
#include "pascaltri/symmetry.hpp"

namespace py = pybind11;
using namespace pascaltri;

namespace {

PixelCloud make_cloud(const std::vector<Complex>& locations, const std::vector<double>& intensities) {
  return PixelCloud::from_points(locations, intensities);
}

std::vector<Complex> locations(const PixelCloud& cloud) {
  std::vector<Complex> out;
  for (const auto& p : cloud.pixels()) out.push_back(p.location);
  return out;
}

std::vector<double> intensities(const PixelCloud& cloud) {
  std::vector<double> out;
  for (const auto& p : cloud.pixels()) out.push_back(p.intensity);
  return out;
}

std::set<FrameTag> tags_from(const std::vector<std::string>& names) {
  std::set<FrameTag> tags;
  for (const auto& n : names) tags.insert(frame_tag_from_string(n));
  return tags;
}

py::object optional_float(const std::optional<double>& v) {
  return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict metrics_dict(const ClassificationMetrics& m) {
  py::dict d;
  d["precision"] = optional_float(m.precision);
  d["recall"] = optional_float(m.recall);
  d["accuracy"] = optional_float(m.accuracy);
  d["true_positives"] = m.true_positives;
  d["false_positives"] = m.false_positives;
  d["true_negatives"] = m.true_negatives;
  d["false_negatives"] = m.false_negatives;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pascaltri, m) {
  m.doc() = "Complex-moment Pascal triangles of discrete images";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<PixelCloud>(m, "PixelCloud")
      .def(py::init(&make_cloud), py::arg("locations"), py::arg("intensities"))
      .def_property_readonly("locations", &locations)
      .def_property_readonly("intensities", &intensities)
      .def("__len__", &PixelCloud::size)
      .def("total_intensity", &PixelCloud::total_intensity)
      .def("nonzero_count", &PixelCloud::nonzero_count)
      .def("translated", &PixelCloud::translated)
      .def("scaled", &PixelCloud::scaled)
      .def("rotated", &PixelCloud::rotated)
      .def("reflected", &PixelCloud::reflected)
      .def("without_zeros", &PixelCloud::without_zeros)
      .def("padded_to", &PixelCloud::padded_to)
      .def(py::self == py::self)
      .def("__repr__", [](const PixelCloud& c) { return "<PixelCloud with " + std::to_string(c.size()) + " pixels>"; });

  py::class_<MomentTable>(m, "MomentTable")
      .def_property_readonly("order", &MomentTable::order)
      .def_property_readonly("max_degree", &MomentTable::max_degree)
      .def("has", &MomentTable::has)
      .def("__getitem__", [](const MomentTable& t, std::pair<int, int> jl) { return t.at(jl.first, jl.second); })
      .def("to_json", [](const MomentTable& t) { return dump_json(to_json(t)); });

  py::class_<PascalTriangle>(m, "PascalTriangle")
      .def_readonly("order", &PascalTriangle::order)
      .def_readonly("rows", &PascalTriangle::rows)
      .def_property_readonly("frame_tags",
                             [](const PascalTriangle& t) {
                               std::vector<std::string> out;
                               for (auto tag : t.frame_tags) out.push_back(to_string(tag));
                               return out;
                             })
      .def("to_json", [](const PascalTriangle& t) { return dump_json(to_json(t)); })
      .def_static("from_json", [](const std::string& text) {
        try {
          return triangle_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
          throw ValidationError(e.what());
        }
      });

  m.def("compute_moments", &compute_moment_table, py::arg("cloud"), py::arg("order"));
  m.def("pascal_triangle",
        [](const PixelCloud& cloud, int order) { return pascal_triangle(compute_moment_table(cloud, order), order); },
        py::arg("cloud"), py::arg("order"));
  m.def("reconstruct", [](const PascalTriangle& t) { return reconstruct_image(t); }, py::arg("triangle"));
  m.def("effective_support", [](const PixelCloud& cloud, int dim) {
        return effective_support(compute_moment_table(cloud, dim - 1), dim).s;
      }, py::arg("cloud"), py::arg("dim"));
  m.def("intensities_from_column",
        [](const std::vector<Complex>& locs, const std::vector<Complex>& column, int l) {
          return intensities_from_column(locs, column, l).intensities;
        },
        py::arg("locations"), py::arg("column"), py::arg("l"));

  m.def("radon_moment", [](const PixelCloud& c, double theta, int n) { return radon_moment_direct(c, theta, n).value; },
        py::arg("cloud"), py::arg("theta"), py::arg("n"));
  m.def("radon_moment_from_row", [](const std::vector<Complex>& row, double theta) {
        return radon_moment_fourier(row, theta).value;
      }, py::arg("row"), py::arg("theta"));
  m.def("angle_schedule", &generic_angle_schedule, py::arg("n"));
  m.def("row_from_samples",
        [](int n, const std::vector<double>& thetas, const std::vector<double>& values) {
          if (thetas.size() != values.size()) throw ValidationError("thetas and values differ in length");
          std::vector<MomentSample> samples;
          for (std::size_t k = 0; k < thetas.size(); ++k) samples.push_back({thetas[k], n, values[k]});
          return row_from_samples(n, samples).row;
        },
        py::arg("n"), py::arg("thetas"), py::arg("values"));

  m.def("invariant_triangle",
        [](const PixelCloud& c, int order, const std::vector<std::string>& groups) {
          return invariant_triangle(c, order, tags_from(groups));
        },
        py::arg("cloud"), py::arg("order"), py::arg("groups") = std::vector<std::string>{"translation", "scaling", "rotation"});
  m.def("triangle_distance", &triangle_distance, py::arg("a"), py::arg("b"));
  m.def("orbits_equivalent",
        [](const PixelCloud& a, const PixelCloud& b, const std::string& group, double tolerance) {
          OrbitOptions options;
          options.tolerance = tolerance;
          const auto r = orbits_equivalent(a, b, group_from_string(group), options);
          py::dict d;
          d["equivalent"] = r.equivalent;
          d["witness"] = r.witness ? py::object(py::cast(*r.witness)) : py::object(py::none());
          d["distance"] = r.distance;
          d["used_fallback"] = r.used_fallback;
          return d;
        },
        py::arg("a"), py::arg("b"), py::arg("group"), py::arg("tolerance") = 1e-8);

  m.def("elongation", [](const PixelCloud& c) { return elongation(centered_table(c, 2)); }, py::arg("cloud"));
  m.def("covariance", [](const PixelCloud& c) { return covariance(centered_table(c, 2)); }, py::arg("cloud"));
  m.def("frs_folds",
        [](const PixelCloud& c, int max_fold, double tol) {
          const auto r = detect_frs(centered_table(c, max_fold + 2), max_fold, tol);
          std::vector<int> folds;
          for (const auto& f : r.detected) folds.push_back(f.fold);
          return folds;
        },
        py::arg("cloud"), py::arg("max_fold") = 6, py::arg("tol") = 1e-9);
  m.def("reflection_axis",
        [](const PixelCloud& c, int order) { return reflection_axis(centered_table(c, order)); },
        py::arg("cloud"), py::arg("order") = 8);
  m.def("reflection_axes",
        [](const PixelCloud& c, int order) { return reflection_axes(centered_table(c, order)); },
        py::arg("cloud"), py::arg("order") = 8);
  m.def("approximate_reflection_axis",
        [](const PixelCloud& c, double max_misfit, int order) {
          return approximate_reflection_axis(centered_table(c, order), {1e-3, max_misfit});
        },
        py::arg("cloud"), py::arg("max_misfit"), py::arg("order") = 4);
  m.def("horizontal_symmetry_score",
        [](const PixelCloud& c) { return horizontal_symmetry_score(centered_table(c, 3)); }, py::arg("cloud"));
  m.def("axis_symmetry",
        [](const PixelCloud& c, double threshold) {
          const auto r = axis_symmetry_classify(centered_table(c, 4), threshold);
          return std::make_pair(to_string(r.verdict), r.axis);
        },
        py::arg("cloud"), py::arg("threshold"));
  m.def("classification_metrics",
        [](const std::vector<bool>& predictions, const std::vector<bool>& truths) {
          const std::unique_ptr<bool[]> p(new bool[predictions.size()]), t(new bool[truths.size()]);
          std::copy(predictions.begin(), predictions.end(), p.get());
          std::copy(truths.begin(), truths.end(), t.get());
          return metrics_dict(classification_metrics({p.get(), predictions.size()}, {t.get(), truths.size()}));
        },
        py::arg("predictions"), py::arg("truths"));

  m.def("load_image",
        [](const std::filesystem::path& path, std::optional<std::string> format, bool y_down) {
          ImageSource source{path, std::nullopt, y_down ? YAxis::down : YAxis::up};
          if (format) source.format = image_format_from_string(*format);
          return load_image(source);
        },
        py::arg("path"), py::arg("format") = py::none(), py::arg("y_down") = false);
  m.def("save_cloud_csv", &save_cloud_csv, py::arg("path"), py::arg("cloud"));

  m.def("synth_corpus",
        [](std::uint64_t seed, int count, double jitter, const std::string& axis_mode) {
          py::list out;
          for (const auto& e : synth_corpus(seed, count, jitter, axis_mode_from_string(axis_mode))) {
            py::dict d;
            d["name"] = e.name;
            d["cloud"] = e.cloud;
            d["symmetric"] = e.symmetric;
            d["axis"] = optional_float(e.axis);
            out.append(d);
          }
          return out;
        },
        py::arg("seed"), py::arg("count"), py::arg("jitter"), py::arg("axis_mode") = "random");
  m.def("run_experiment",
        [](const std::vector<PixelCloud>& clouds, const std::vector<bool>& labels, const std::string& mode,
           std::optional<std::string> sweep, int jobs) {
          ExperimentConfig config;
          config.mode = experiment_mode_from_string(mode);
          if (sweep) config.sweep = parse_sweep(*sweep);
          else if (config.mode == ExperimentMode::axis) config.sweep = {1.0, 15.0, 1.0};
          config.jobs = jobs;
          const std::unique_ptr<bool[]> flags(new bool[labels.size()]);
          std::copy(labels.begin(), labels.end(), flags.get());
          ExperimentResult r;
          {
            py::gil_scoped_release release;
            r = run_experiment(config, clouds, {flags.get(), labels.size()});
          }
          py::list rows;
          for (const auto& row : r.rows) {
            py::dict d = metrics_dict(row.metrics);
            d["threshold"] = row.threshold;
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["best_threshold"] = r.best_threshold;
          out["best_accuracy"] = r.best_accuracy;
          return out;
        },
        py::arg("clouds"), py::arg("labels"), py::arg("mode") = "horizontal", py::arg("sweep") = py::none(),
        py::arg("jobs") = 1);
}
