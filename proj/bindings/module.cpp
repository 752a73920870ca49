#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "g2lab/cobordism_flow.hpp"
#include "g2lab/exterior.hpp"
#include "g2lab/homogeneous.hpp"
#include "g2lab/invariant_forms.hpp"
#include "g2lab/lifting.hpp"
#include "g2lab/reduced_relation.hpp"
#include "g2lab/rng.hpp"
#include "g2lab/scenario.hpp"
#include "g2lab/stable_forms.hpp"

namespace py = pybind11;
using namespace g2lab;

namespace {

std::vector<double> coeffs_of(const AltForm& a) {
  std::vector<double> out(static_cast<size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) out[static_cast<size_t>(i)] = a[i];
  return out;
}

AltForm three_form(const std::vector<double>& coeffs) {
  int dim;
  if (coeffs.size() == 20) {
    dim = 6;
  } else if (coeffs.size() == 35) {
    dim = 7;
  } else {
    throw std::invalid_argument(
        "expected 20 (dim 6) or 35 (dim 7) coefficients");
  }
  AltForm a(dim, 3);
  for (int i = 0; i < a.size(); ++i) a[i] = coeffs[static_cast<size_t>(i)];
  return a;
}

ModelAlgebra model_of(const std::string& name) {
  return ModelAlgebra::preset(name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "definite 3-forms, homogeneous cobordism flows, reduced checks, and "
      "horizontal lifts";

  m.def("psi0", [] { return coeffs_of(psi0()); },
        "normal definite 3-form in dimension 6 (20 coefficients)");
  m.def("omega0", [] { return coeffs_of(omega0()); },
        "standard pencil 2-form (15 coefficients)");
  m.def("phi0", [] { return coeffs_of(phi0()); },
        "normal definite 3-form in dimension 7 (35 coefficients)");

  m.def(
      "lambda_invariant",
      [](const std::vector<double>& coeffs, double volcoef) {
        return lambda_invariant(three_form(coeffs), volcoef);
      },
      py::arg("coeffs"), py::arg("volcoef") = 1.0,
      "normalized quartic orbit invariant of a dimension-6 3-form");

  m.def(
      "classify",
      [](const std::vector<double>& coeffs, double volcoef) {
        return std::string(
            verdict_name(classify_exact(three_form(coeffs), volcoef)));
      },
      py::arg("coeffs"), py::arg("volcoef") = 1.0,
      "exact orbit classification: Definite / OtherOpenOrbit / Degenerate");

  m.def(
      "metric_of",
      [](const std::vector<double>& coeffs) {
        const MetricResult mr = metric_from_phi(three_form(coeffs));
        return py::make_tuple(Eigen::MatrixXd(mr.metric), mr.volume);
      },
      py::arg("coeffs"),
      "metric and volume induced by a definite dimension-7 3-form");

  m.def(
      "assemble_psi",
      [](double f, const Eigen::Matrix3d& a, const Eigen::Matrix3d& e) {
        return coeffs_of(assemble_psi({f, a, e}));
      },
      py::arg("f"), py::arg("A"), py::arg("E"));
  m.def(
      "decompose_psi",
      [](const std::vector<double>& coeffs) {
        const InvariantTriple t = decompose_psi(three_form(coeffs));
        return py::make_tuple(t.f, Eigen::MatrixXd(t.A), Eigen::MatrixXd(t.E));
      },
      py::arg("coeffs"));
  m.def(
      "assemble_omega",
      [](const Eigen::Matrix3d& k, double f, const Eigen::Matrix3d& a,
         const Eigen::Matrix3d& e) {
        return coeffs_of(assemble_omega(k, {f, a, e}));
      },
      py::arg("K"), py::arg("f"), py::arg("A"), py::arg("E"));

  m.def(
      "levi_civita",
      [](const Eigen::Matrix3d& e, const std::string& model) {
        return Eigen::MatrixXd(levi_civita(e, model_of(model)));
      },
      py::arg("E"), py::arg("model"));
  m.def(
      "curvature",
      [](const Eigen::Matrix3d& e, const std::string& model) {
        const ModelAlgebra alg = model_of(model);
        return Eigen::MatrixXd(curvature(levi_civita(e, alg), e, alg));
      },
      py::arg("E"), py::arg("model"),
      "curvature of the torsion-free connection for the given frame");
  m.def(
      "einstein_tensor",
      [](const Eigen::Matrix3d& e, const std::string& model) {
        return Eigen::MatrixXd(einstein_oracle(e, model_of(model)));
      },
      py::arg("E"), py::arg("model"));

  m.def(
      "run_scenario",
      [](const std::string& json_text, bool paper_literal,
         const std::string& name) {
        RunOptions opt;
        opt.paper_literal = paper_literal;
        const RunResult r = run_scenario(parse_scenario(json_text, name), opt);
        py::dict out;
        out["exit_code"] = r.exit_code;
        out["report"] = r.report.dump(2);
        out["trace_csv"] = r.trace_csv;
        out["lift_csv"] = r.lift_csv;
        out["reduced_csv"] = r.reduced_csv;
        return out;
      },
      py::arg("json_text"), py::arg("paper_literal") = false,
      py::arg("name") = "scenario",
      "execute a scenario document and return the report and artifacts");

  py::register_exception<NotDefinite>(m, "NotDefiniteError");
  py::register_exception<NotDecomposable>(m, "NotDecomposableError");
  py::register_exception<ScenarioError>(m, "ScenarioError");
}
