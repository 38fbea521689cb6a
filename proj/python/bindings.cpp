// Copyright 2026 The MDDL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mddl/bench.hpp"
#include "mddl/classify.hpp"
#include "mddl/dictionary.hpp"
#include "mddl/domains.hpp"
#include "mddl/error.hpp"
#include "mddl/oracle.hpp"
#include "mddl/solver.hpp"
#include "mddl/synthetic.hpp"
#include "mddl/weighting.hpp"

namespace py = pybind11;
using namespace mddl;

namespace {

// Runs a bench spec given as JSON text; returns the report as JSON text.
std::string run_bench_json(const std::string& spec, const std::filesystem::path& base_dir,
                           bool sweep) {
  ExperimentSpec s = experiment_from_json(nlohmann::json::parse(spec), base_dir);
  if (!sweep) s.sweep.reset();
  return report_to_json(run_experiment(s)).dump();
}

}  // namespace

PYBIND11_MODULE(_mddl, m) {
  m.doc() = "Multi-domain sparse dictionary classification.";
  m.attr("__version__") = MDDL_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<Dictionary>(m, "Dictionary")
      .def(py::init<Matrix, std::size_t, std::size_t, std::vector<std::string>,
                    std::vector<std::string>, bool>(),
           py::arg("data"), py::arg("n"), py::arg("s"), py::arg("class_labels"),
           py::arg("domain_labels"), py::arg("normalized") = false)
      .def_property_readonly("d", &Dictionary::d)
      .def_property_readonly("n", &Dictionary::n)
      .def_property_readonly("s", &Dictionary::s)
      .def_property_readonly("normalized", &Dictionary::normalized)
      .def_property_readonly("data", &Dictionary::data)
      .def_property_readonly("class_labels", &Dictionary::class_labels)
      .def_property_readonly("domain_labels", &Dictionary::domain_labels)
      .def("atom", [](const Dictionary& d, std::size_t k, std::size_t l) { return Vector(d.atom(k, l)); },
           py::arg("cls"), py::arg("domain"))
      .def("domain", &Dictionary::domain, py::arg("domain"))
      .def("__repr__", [](const Dictionary& d) {
        return "<Dictionary d=" + std::to_string(d.d()) + " n=" + std::to_string(d.n()) +
               " s=" + std::to_string(d.s()) + ">";
      });

  m.def("load_dictionary", &load_dictionary, py::arg("manifest"));
  m.def("save_dictionary", &save_dictionary, py::arg("dictionary"), py::arg("manifest"));
  m.def("normalize_atoms", &normalize_atoms, py::arg("dictionary"));
  m.def("assemble_miscellaneous", &assemble_miscellaneous, py::arg("source"),
        py::arg("transferred"));

  py::enum_<TransformKind>(m, "TransformKind")
      .value("illumination", TransformKind::illumination)
      .value("occlusion", TransformKind::occlusion)
      .value("additive_noise", TransformKind::additive_noise)
      .value("blur", TransformKind::blur)
      .value("contrast", TransformKind::contrast);

  // Transforms cross the boundary in their JSON form.
  m.def(
      "apply_transform",
      [](const py::object& spec, const Dictionary& source) {
        const auto text = py::module_::import("json").attr("dumps")(spec).cast<std::string>();
        return apply_transform(transform_from_json(nlohmann::json::parse(text)), source);
      },
      py::arg("transform"), py::arg("source"),
      "Apply one transform, given as a dict {kind, label, seed, params, geometry}.");
  m.def(
      "generate_miscellaneous",
      [](const Dictionary& source, const py::object& specs) {
        const auto text = py::module_::import("json").attr("dumps")(specs).cast<std::string>();
        std::vector<DomainTransform> suite;
        for (const auto& j : nlohmann::json::parse(text)) suite.push_back(transform_from_json(j));
        return generate_miscellaneous(source, build_transform_suite(suite));
      },
      py::arg("source"), py::arg("transforms"));

  py::class_<WeightingMatrix>(m, "WeightingMatrix")
      .def(py::init<Matrix>(), py::arg("blocks"))
      .def_property_readonly("blocks", &WeightingMatrix::blocks)
      .def("dense", &WeightingMatrix::dense);
  m.def("softmax_block", &softmax_block, py::arg("c"));
  m.def("build_weighting", &build_weighting, py::arg("dictionary"), py::arg("q"));
  m.def("weighted_dictionary", &weighted_dictionary, py::arg("dictionary"), py::arg("weighting"));

  py::enum_<WeightingMode>(m, "WeightingMode")
      .value("none", WeightingMode::none)
      .value("softmax", WeightingMode::softmax);
  py::enum_<DualUpdate>(m, "DualUpdate")
      .value("scaled", DualUpdate::scaled)
      .value("paper", DualUpdate::paper);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &SolverConfig::lambda)
      .def_readwrite("l2_penalty", &SolverConfig::l2_penalty)
      .def_readwrite("tau0", &SolverConfig::tau0)
      .def_readwrite("tau_growth", &SolverConfig::tau_growth)
      .def_readwrite("tau_max", &SolverConfig::tau_max)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("tol", &SolverConfig::tol)
      .def_readwrite("weighting", &SolverConfig::weighting)
      .def_readwrite("dual_update", &SolverConfig::dual_update)
      .def("validate", py::overload_cast<>(&SolverConfig::validate, py::const_));

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("x", &SolveResult::x)
      .def_readonly("converged", &SolveResult::converged)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("recovery_error", &SolveResult::recovery_error)
      .def_readonly("primal_residual", &SolveResult::primal_residual)
      .def_readonly("wall_time_s", &SolveResult::wall_time_s)
      .def_readonly("weighting", &SolveResult::weighting);

  m.def("soft_shrink", &soft_shrink, py::arg("v"), py::arg("kappa"));
  m.def(
      "solve_admm",
      [](const Matrix& a, const Vector& b, const SolverConfig& cfg) { return solve_admm(a, b, cfg); },
      py::arg("a"), py::arg("b"), py::arg("config") = SolverConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "solve_query",
      [](const Dictionary& d, const Vector& q, const SolverConfig& cfg) { return solve_query(d, q, cfg); },
      py::arg("dictionary"), py::arg("q"), py::arg("config") = SolverConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def("lasso_objective", &lasso_objective, py::arg("a"), py::arg("b"), py::arg("lambda_"),
        py::arg("x"), py::arg("l2_penalty") = 0.0);

  py::enum_<ClassScore>(m, "ClassScore")
      .value("max_component", ClassScore::max_component)
      .value("sum_abs", ClassScore::sum_abs);
  py::class_<ClassificationResult>(m, "ClassificationResult")
      .def_readonly("class_id", &ClassificationResult::class_id)
      .def_readonly("inferred_domain", &ClassificationResult::inferred_domain)
      .def_readonly("ranking", &ClassificationResult::ranking)
      .def_readonly("score_per_class", &ClassificationResult::score_per_class)
      .def_readonly("degenerate", &ClassificationResult::degenerate);
  m.def(
      "classify",
      [](const Vector& x, const std::optional<WeightingMatrix>& w, std::size_t n, std::size_t s,
         WeightingMode mode, ClassScore score) {
        return classify(x, w ? &*w : nullptr, n, s, mode, score);
      },
      py::arg("x"), py::arg("weighting"), py::arg("n"), py::arg("s"), py::arg("mode"),
      py::arg("score") = ClassScore::max_component);
  m.def("top_k_recall", &top_k_recall, py::arg("results"), py::arg("truth"), py::arg("k"));
  m.def("accuracy", &accuracy, py::arg("results"), py::arg("truth"));

  py::class_<SyntheticDataset>(m, "SyntheticDataset")
      .def_readonly("dictionary", &SyntheticDataset::dictionary)
      .def_property_readonly("queries", [](const SyntheticDataset& s) { return s.tests.queries; })
      .def_property_readonly("classes", [](const SyntheticDataset& s) { return s.tests.classes; })
      .def_property_readonly("domains", [](const SyntheticDataset& s) { return s.tests.domains; });
  m.def(
      "gen_synthetic",
      [](std::size_t d, std::size_t n, std::size_t s, double separation, std::uint64_t seed,
         std::size_t test_count, double amplitude) {
        SyntheticSpec spec;
        spec.d = d;
        spec.n = n;
        spec.s = s;
        spec.separation = separation;
        spec.seed = seed;
        spec.test_count = test_count;
        spec.amplitude = amplitude;
        return gen_synthetic(spec);
      },
      py::arg("d") = 256, py::arg("n") = 50, py::arg("s") = 6, py::arg("separation") = 2.0,
      py::arg("seed") = 0, py::arg("test_count") = 300, py::arg("amplitude") = 16.0);

  m.def("lasso_cd",
        [](const Matrix& a, const Vector& b, double lambda) { return oracle::lasso_cd(a, b, lambda); },
        py::arg("a"), py::arg("b"), py::arg("lambda_"));
  m.def("kkt_residual", &oracle::kkt_residual, py::arg("a"), py::arg("b"), py::arg("lambda_"),
        py::arg("x"));

  m.def("_run_bench_json", &run_bench_json, py::arg("spec"), py::arg("base_dir") = std::filesystem::path{},
        py::arg("sweep") = false, py::call_guard<py::gil_scoped_release>());
}
