#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mig/harness/config.hpp"
#include "mig/harness/experiments.hpp"
#include "mig/harness/matrix_io.hpp"
#include "mig/projection.hpp"
#include "mig/scenario.hpp"

namespace py = pybind11;
using namespace mig;

namespace {

HpdSet to_set(const std::vector<CMatrix>& mats) {
  std::vector<HpdMatrix> out;
  out.reserve(mats.size());
  for (const auto& m : mats) out.emplace_back(m);
  return HpdSet(std::move(out));
}

std::vector<CMatrix> from_set(const std::vector<HpdMatrix>& set) {
  std::vector<CMatrix> out;
  out.reserve(set.size());
  for (const auto& m : set) out.push_back(m.matrix());
  return out;
}

harness::ExperimentConfig make_config(const std::string& text, std::optional<std::uint64_t> seed,
                                      std::optional<std::string> out) {
  auto cfg = harness::parse_config(text);
  if (seed) cfg.seed = *seed;
  if (out) cfg.output_dir = *out;
  cfg.validate();
  return cfg;
}

py::list errors_to_py(const std::vector<harness::RunError>& errors) {
  py::list out;
  for (const auto& e : errors) out.append(py::make_tuple(e.scope, e.message));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Native core of migdet.";

  py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(mod, "NumericError", PyExc_ArithmeticError);

  mod.def("measures", [] {
    std::vector<std::string> out;
    for (Measure m : kAllMeasures) out.push_back(to_string(m));
    return out;
  });

  mod.def(
      "sq_dist",
      [](const std::string& measure, const CMatrix& x, const CMatrix& y) {
        return sq_dist(parse_measure(measure), HpdMatrix(x), HpdMatrix(y));
      },
      py::arg("measure"), py::arg("x"), py::arg("y"));

  mod.def(
      "geometric_mean",
      [](const std::string& measure, const std::vector<CMatrix>& set) -> CMatrix {
        return geometric_mean(parse_measure(measure), to_set(set)).matrix();
      },
      py::arg("measure"), py::arg("matrices"));

  mod.def(
      "arithmetic_mean", [](const std::vector<CMatrix>& set) -> CMatrix { return arithmetic_mean(to_set(set)).matrix(); },
      py::arg("matrices"));

  mod.def(
      "dlog_kernel",
      [](const CMatrix& v, const CMatrix& l) -> CMatrix {
        return dlog_kernel(HpdMatrix(v), HermitianMatrix(l)).matrix();
      },
      py::arg("v"), py::arg("l"));

  mod.def(
      "learn_projection",
      [](const std::string& measure, const std::vector<CMatrix>& data, Index target_dim, std::uint64_t seed,
         int outer_iterations) {
        LearnerConfig cfg;
        cfg.seed = seed;
        cfg.outer_iterations = outer_iterations;
        const auto res = learn_projection(parse_measure(measure), to_set(data), target_dim, cfg);
        py::dict out;
        out["w"] = res.w.matrix();
        out["final_variance"] = res.final_variance;
        out["objective_trace"] = res.objective_trace;
        out["accepted_steps"] = res.accepted_steps;
        out["zero_variance"] = res.zero_variance;
        return out;
      },
      py::arg("measure"), py::arg("data"), py::arg("target_dim"), py::arg("seed") = 1,
      py::arg("outer_iterations") = 50);

  mod.def("steering", &steering, py::arg("n"), py::arg("f_d"));

  mod.def(
      "build_hpd_observation", [](const CVector& x) -> CMatrix { return build_hpd_observation(x).matrix(); },
      py::arg("x"));

  mod.def(
      "clutter_cov",
      [](const std::string& config_text) -> CMatrix {
        return clutter_cov(make_config(config_text, std::nullopt, std::nullopt).scenario).matrix();
      },
      py::arg("config_text") = "");

  mod.def(
      "gen_training",
      [](const std::string& config_text, std::optional<std::uint64_t> seed) {
        const auto cfg = make_config(config_text, seed, std::nullopt);
        const auto set = gen_training(cfg.scenario, cfg.training_j, cfg.training_k, cfg.training_scr_db, cfg.seed);
        return py::make_tuple(from_set(set.clutter_only), from_set(set.with_target));
      },
      py::arg("config_text") = "", py::arg("seed") = py::none());

  mod.def(
      "canonical_config",
      [](const std::string& text) { return harness::to_config_text(make_config(text, std::nullopt, std::nullopt)); },
      py::arg("config_text") = "");

  mod.def(
      "write_matrices",
      [](const std::filesystem::path& path, const std::vector<CMatrix>& mats) { harness::write_matrices(path, mats); },
      py::arg("path"), py::arg("matrices"));
  mod.def(
      "read_matrices", [](const std::filesystem::path& path) { return harness::read_matrices(path); },
      py::arg("path"));

  mod.def(
      "run_gen_training",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> out) {
        const auto res = harness::run_gen_training(make_config(text, seed, out));
        return py::make_tuple(res.clutter_file, res.target_file);
      },
      py::arg("config_text") = "", py::arg("seed") = py::none(), py::arg("out") = py::none());

  mod.def(
      "run_sweep",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> out) {
        harness::SweepResult res;
        {
          py::gil_scoped_release release;
          res = harness::run_sweep(make_config(text, seed, out));
        }
        py::list curves;
        for (const auto& c : res.curves) {
          py::dict d;
          d["detector"] = c.detector;
          d["measure"] = c.measure;
          d["M"] = c.m;
          d["K"] = c.k;
          d["threshold"] = c.threshold;
          d["empirical_pfa"] = c.empirical_pfa;
          py::list scr, pd;
          for (const auto& r : c.rows) {
            scr.append(r.scr_db);
            pd.append(r.pd);
          }
          d["scr_db"] = scr;
          d["pd"] = pd;
          d["csv"] = c.csv;
          d["error"] = c.error;
          curves.append(d);
        }
        py::dict out_dict;
        out_dict["curves"] = curves;
        out_dict["errors"] = errors_to_py(res.errors);
        out_dict["seconds"] = res.seconds;
        return out_dict;
      },
      py::arg("config_text") = "", py::arg("seed") = py::none(), py::arg("out") = py::none());

  mod.def(
      "run_distances",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> out) {
        harness::DistanceResult res;
        {
          py::gil_scoped_release release;
          res = harness::run_distances(make_config(text, seed, out));
        }
        py::dict d;
        for (const auto& s : res.summaries) {
          py::dict row;
          row["clutter_mean"] = s.clutter_mean;
          row["clutter_std"] = s.clutter_std;
          row["target_mean"] = s.target_mean;
          row["target_std"] = s.target_std;
          row["separation"] = s.separation();
          d[py::str(to_string(s.measure))] = row;
        }
        return py::make_tuple(d, errors_to_py(res.errors));
      },
      py::arg("config_text") = "", py::arg("seed") = py::none(), py::arg("out") = py::none());

  mod.def(
      "run_bench",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::string> out) {
        std::vector<harness::BenchRow> rows;
        {
          py::gil_scoped_release release;
          rows = harness::run_bench(make_config(text, seed, out));
        }
        py::list l;
        for (const auto& r : rows) {
          py::dict d;
          d["kind"] = r.kind;
          d["name"] = r.name;
          d["N"] = r.n;
          d["K"] = r.k;
          d["M"] = r.m;
          d["median_seconds"] = r.median_seconds;
          d["repetitions"] = r.repetitions;
          d["complexity"] = r.complexity;
          l.append(d);
        }
        return l;
      },
      py::arg("config_text") = "", py::arg("seed") = py::none(), py::arg("out") = py::none());
}
