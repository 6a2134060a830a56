#include "cvqkd/error.hpp"
#include "cvqkd/gaussian.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/models.hpp"
#include "cvqkd/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cvqkd;

namespace {

ModelKind model_arg(const std::string& name) {
  if (auto k = parse_model_kind(name)) return *k;
  throw ParameterError("unknown model '" + name + "'");
}

Reconciliation recon_arg(const std::string& name) {
  if (auto r = parse_reconciliation(name)) return *r;
  throw ParameterError("unknown reconciliation '" + name + "'");
}

Quadrature quadrature_arg(const std::string& name) {
  if (name == "x") return Quadrature::X;
  if (name == "p") return Quadrature::P;
  throw ParameterError("quadrature must be 'x' or 'p', got '" + name + "'");
}

py::dict point_dict(const KeyRatePoint& p) {
  py::dict d;
  d["model"] = std::string(to_string(p.model));
  d["recon"] = std::string(to_string(p.recon));
  d["T"] = p.T;
  d["i_ab"] = p.i_ab;
  d["holevo"] = p.holevo;
  d["key_rate"] = p.key_rate;
  d["beta"] = p.beta;
  d["feasible"] = p.feasible;
  d["diagnostic"] = p.diagnostic;
  return d;
}

py::dict report_dict(const verify::Report& r) {
  py::list checks;
  for (const auto& c : r.checks) {
    py::dict d;
    d["name"] = c.name;
    d["status"] = std::string(verify::to_string(c.status));
    d["deviation"] = c.deviation;
    d["tolerance"] = c.tolerance;
    d["detail"] = c.detail;
    checks.append(d);
  }
  py::dict d;
  d["passed"] = r.passed();
  d["checks"] = checks;
  d["warnings"] = r.warnings;
  d["text"] = r.to_text();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian-state key rate bounds with trusted source noise";

  auto base = py::register_exception<Error>(m, "CvqkdError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<SymmetryError>(m, "SymmetryError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<UnphysicalStateError>(m, "UnphysicalStateError", base);
  auto param = py::register_exception<ParameterError>(m, "ParameterError", base);
  py::register_exception<RegimeError>(m, "RegimeError", param);
  py::register_exception<ProtocolMismatchError>(m, "ProtocolMismatchError", base);
  py::register_exception<InternalError>(m, "InternalError", base);

  py::class_<SourceParams>(m, "SourceParams")
      .def(py::init([](double V, double T_A, double chi_A) {
             SourceParams s{V, T_A, chi_A};
             s.validate();
             return s;
           }),
           py::arg("V") = 20.0, py::arg("T_A") = 1.0, py::arg("chi_A") = 0.0)
      .def_static("from_excess_noise", &SourceParams::from_excess_noise, py::arg("V"),
                  py::arg("T_A"), py::arg("epsilon_A"))
      .def_readonly("V", &SourceParams::V)
      .def_readonly("T_A", &SourceParams::T_A)
      .def_readonly("chi_A", &SourceParams::chi_A)
      .def_property_readonly("epsilon_A", &SourceParams::epsilon_A)
      .def_property_readonly("effective_variance", &SourceParams::effective_variance)
      .def("__repr__", [](const SourceParams& s) {
        return "SourceParams(V=" + std::to_string(s.V) + ", T_A=" + std::to_string(s.T_A) +
               ", chi_A=" + std::to_string(s.chi_A) + ")";
      });

  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init([](double T, double chi) {
             ChannelParams c{T, chi};
             c.validate();
             return c;
           }),
           py::arg("T") = 1.0, py::arg("chi") = 0.0)
      .def_static("from_excess_noise", &ChannelParams::from_excess_noise, py::arg("T"),
                  py::arg("epsilon"))
      .def_readonly("T", &ChannelParams::T)
      .def_readonly("chi", &ChannelParams::chi)
      .def_property_readonly("epsilon", &ChannelParams::epsilon);

  m.def("chi_from_excess_noise", &chi_from_excess_noise, py::arg("T"), py::arg("epsilon"));

  m.def(
      "symplectic_eigenvalues",
      [](const Eigen::MatrixXd& g) { return symplectic_eigenvalues(CovarianceMatrix(g)); },
      py::arg("gamma"));
  m.def(
      "von_neumann_entropy",
      [](const Eigen::MatrixXd& g) { return von_neumann_entropy(CovarianceMatrix(g)); },
      py::arg("gamma"));
  m.def("g_function", &g_function, py::arg("x"));
  m.def(
      "is_physical",
      [](const Eigen::MatrixXd& g, double tol) { return is_physical(CovarianceMatrix(g), tol); },
      py::arg("gamma"), py::arg("tol") = kPhysicalTol);
  m.def(
      "condition_on_heterodyne",
      [](const Eigen::MatrixXd& g, std::vector<int> kept, std::vector<int> measured) {
        return condition_on_heterodyne(CovarianceMatrix(g), {std::move(kept), std::move(measured)})
            .data();
      },
      py::arg("gamma"), py::arg("kept"), py::arg("measured"));
  m.def(
      "condition_on_homodyne",
      [](const Eigen::MatrixXd& g, std::vector<int> kept, std::vector<int> measured,
         const std::string& quadrature) {
        return condition_on_homodyne(CovarianceMatrix(g), {std::move(kept), std::move(measured)},
                                     quadrature_arg(quadrature))
            .data();
      },
      py::arg("gamma"), py::arg("kept"), py::arg("measured"), py::arg("quadrature") = "x");

  m.def(
      "build_gamma_ab",
      [](const SourceParams& s, const ChannelParams& c) { return build_gamma_ab(s, c).data(); },
      py::arg("source"), py::arg("channel"));
  m.def(
      "model_matrix",
      [](const std::string& model, const SourceParams& s, const ChannelParams& c) {
        return build_model_state(model_arg(model), s, c).gamma.data();
      },
      py::arg("model"), py::arg("source"), py::arg("channel"));
  m.def(
      "amplification_params",
      [](const SourceParams& s) {
        const auto d = amplification_params(s);
        py::dict out;
        out["V_B"] = d.V_B;
        out["T_B"] = d.T_B;
        out["chi_B"] = d.chi_B;
        out["N_B"] = d.N_B;
        return out;
      },
      py::arg("source"));

  m.def(
      "holevo_bound",
      [](const std::string& model, const std::string& recon, const SourceParams& s,
         const ChannelParams& c) { return holevo_bound(model_arg(model), recon_arg(recon), s, c); },
      py::arg("model"), py::arg("recon"), py::arg("source"), py::arg("channel"));
  m.def(
      "key_rate",
      [](const std::string& model, const std::string& recon, const SourceParams& s,
         const ChannelParams& c, double beta) {
        return point_dict(key_rate(model_arg(model), recon_arg(recon), s, c, beta));
      },
      py::arg("model"), py::arg("recon"), py::arg("source"), py::arg("channel"),
      py::arg("beta") = 1.0);
  m.def(
      "sweep",
      [](const std::vector<std::string>& models, const std::string& recon, const SourceParams& s,
         double epsilon, const std::vector<double>& t_grid, double beta, unsigned threads) {
        std::vector<ModelKind> kinds;
        for (const auto& name : models) kinds.push_back(model_arg(name));
        std::vector<KeyRatePoint> rows;
        {
          py::gil_scoped_release release;
          rows = sweep(kinds, recon_arg(recon), s, epsilon, t_grid, beta, threads);
        }
        py::list out;
        for (const auto& p : rows) out.append(point_dict(p));
        return out;
      },
      py::arg("models"), py::arg("recon"), py::arg("source"), py::arg("epsilon"),
      py::arg("t_grid"), py::arg("beta") = 1.0, py::arg("threads") = 1u);
  m.def("make_t_grid", &make_t_grid, py::arg("t_min"), py::arg("t_max"), py::arg("t_step"));

  m.def(
      "eb_pm_equivalence_check",
      [](const SourceParams& s, double tol) {
        return report_dict(verify::eb_pm_equivalence_check(s, tol));
      },
      py::arg("source"), py::arg("tol") = 1e-10);
  m.def(
      "gamma_b_af_of_w",
      [](const SourceParams& s, const ChannelParams& c, double w) {
        return verify::gamma_b_af_of_w(s, c, w).data();
      },
      py::arg("source"), py::arg("channel"), py::arg("w"));
  m.def(
      "w_monotonicity_check",
      [](const SourceParams& s, const ChannelParams& c, int samples, double tol) {
        return report_dict(verify::w_monotonicity_check(s, c, samples, tol));
      },
      py::arg("source"), py::arg("channel"), py::arg("samples") = 99, py::arg("tol") = 1e-10);
  m.def(
      "lemma_suite",
      [](const SourceParams& s, double epsilon, const std::vector<double>& t_grid,
         double reverse_tol, double direct_tol) {
        return report_dict(
            verify::lemma_suite(s, epsilon, t_grid, {reverse_tol, direct_tol}));
      },
      py::arg("source"), py::arg("epsilon"), py::arg("t_grid"), py::arg("reverse_tol") = 1e-8,
      py::arg("direct_tol") = 1e-10);
}
