#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmult/families.hpp"
#include "qmult/io.hpp"
#include "qmult/norms.hpp"
#include "qmult/qubit.hpp"
#include "qmult/verify.hpp"

namespace py = pybind11;
using namespace qmult;

namespace {

py::dict norm_result_dict(const NormResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["maximizer"] = r.maximizer;
  d["restarts_agreeing"] = r.restarts_agreeing;
  d["converged"] = r.converged;
  d["exact"] = r.exact;
  d["warnings"] = r.warnings;
  return d;
}

OptimizerConfig make_config(int restarts, int max_iters, double step_tolerance, std::uint64_t seed) {
  OptimizerConfig c;
  c.restarts = restarts;
  c.max_iters = max_iters;
  c.step_tolerance = step_tolerance;
  c.seed = seed;
  return c;
}

py::dict report_dict(const VerificationReport& r) {
  return py::module_::import("json").attr("loads")(report_to_json(r).dump());
}

DescribedChannel plain(const ChannelMap& k, const char* family) { return {k, {family, json::object(), std::nullopt}}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Schatten norms, maximal output purity and multiplicativity checks for linear maps";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<ChannelMap>(m, "ChannelMap")
      .def(py::init<int, int, Matrix>(), py::arg("in_dim"), py::arg("out_dim"), py::arg("transfer"))
      .def_property_readonly("in_dim", &ChannelMap::in_dim)
      .def_property_readonly("out_dim", &ChannelMap::out_dim)
      .def_property_readonly("transfer", &ChannelMap::transfer)
      .def("choi", &ChannelMap::choi)
      .def("apply", &ChannelMap::apply, py::arg("a"))
      .def("kraus", [](const ChannelMap& k, double cutoff) { return k.kraus(cutoff).operators(); },
           py::arg("cutoff") = 1e-12)
      .def_static("from_choi", &ChannelMap::from_choi, py::arg("in_dim"), py::arg("out_dim"), py::arg("choi"))
      .def_static("from_kraus",
                  [](std::vector<Matrix> ops) { return ChannelMap::from_kraus(KrausSet(std::move(ops))); },
                  py::arg("operators"))
      .def("to_json", [](const ChannelMap& k) { return channel_to_json(k).dump(); })
      .def_static("from_json", [](const std::string& text) { return channel_from_json(json::parse(text)).map; });

  m.def("schatten_norm", [](const Matrix& a, double p) { return schatten_norm(a, SchattenExponent(p)); },
        py::arg("a"), py::arg("p"));
  m.def("kron", &kron);
  m.def("tensor", &tensor);
  m.def("compose", &compose);
  m.def("adjoint_channel", &adjoint_channel);

  m.def("is_cp", [](const ChannelMap& k, double tol) {
        const CpReport r = is_cp(k, tol);
        py::dict d;
        d["cp"] = r.cp;
        d["hermiticity_preserving"] = r.hermiticity_preserving;
        d["min_eigenvalue"] = r.min_eigenvalue;
        return d;
      }, py::arg("k"), py::arg("tol") = 1e-9);
  m.def("is_ep_in_basis", [](const ChannelMap& k, double tol) {
        const EpReport r = is_ep_in_basis(k, tol);
        py::dict d;
        d["ep"] = r.ep;
        d["violation"] = r.violation;
        d["worst"] = py::make_tuple(r.i, r.j, r.k, r.l);
        return d;
      }, py::arg("k"), py::arg("tol") = 1e-10);
  m.def("is_trace_preserving", &is_trace_preserving, py::arg("k"), py::arg("tol") = 1e-10);
  m.def("two_positive_falsify",
        [](const ChannelMap& k, int samples, std::uint64_t seed) { return two_positive_falsify(k, samples, seed).not_falsified; },
        py::arg("k"), py::arg("samples") = 1000, py::arg("seed") = 0);

  m.def("identity_channel", &identity_channel);
  m.def("depolarizing", &depolarizing, py::arg("d"), py::arg("lam"));
  m.def("generalized_depolarizing", &generalized_depolarizing, py::arg("lam"), py::arg("gamma"),
        py::arg("diagonalize_gamma") = false);
  m.def("werner_holevo", &werner_holevo, py::arg("d"));
  m.def("transpose_map", &transpose_map, py::arg("d"));
  m.def("random_cp_channel", &random_cp_channel, py::arg("n"), py::arg("m"), py::arg("kraus_count"),
        py::arg("seed"), py::arg("trace_preserving") = true);
  m.def("random_ep_cp_channel", &random_ep_cp_channel, py::arg("n"), py::arg("m"), py::arg("kraus_count"),
        py::arg("seed"), py::arg("trace_preserving") = true);
  m.def("qubit_from_diagonal", [](std::array<double, 3> lam, std::array<double, 3> t) {
        return qubit_from_diagonal({lam, t});
      }, py::arg("lam"), py::arg("t"));
  m.def("qubit_is_ep_canonical", [](std::array<double, 3> lam, std::array<double, 3> t) {
        return qubit_is_ep_canonical({lam, t});
      }, py::arg("lam"), py::arg("t"));
  m.def("pauli_transfer", [](const ChannelMap& k) { return Eigen::Matrix4d(pauli_transfer(k).a); });

  m.def("p2q_norm", [](const ChannelMap& k, double p, double q, int restarts, int max_iters, double step_tol,
                       std::uint64_t seed) {
        return norm_result_dict(p2q_norm(k, SchattenExponent(p), SchattenExponent(q),
                                         make_config(restarts, max_iters, step_tol, seed)));
      }, py::arg("k"), py::arg("p"), py::arg("q"), py::arg("restarts") = 32, py::arg("max_iters") = 500,
      py::arg("step_tolerance") = 1e-8, py::arg("seed") = 0);
  m.def("nu", [](const ChannelMap& k, double t, int restarts, int max_iters, double step_tol, std::uint64_t seed) {
        return norm_result_dict(nu(k, SchattenExponent(t), make_config(restarts, max_iters, step_tol, seed)));
      }, py::arg("k"), py::arg("t"), py::arg("restarts") = 32, py::arg("max_iters") = 500,
      py::arg("step_tolerance") = 1e-8, py::arg("seed") = 0);

  m.def("check_theorem2", [](const ChannelMap& phi, const ChannelMap& omega, int t, int restarts, std::uint64_t seed) {
        return report_dict(check_theorem2(plain(phi, "python"), plain(omega, "python"), t,
                                          make_config(restarts, 500, 1e-8, seed)));
      }, py::arg("phi"), py::arg("omega"), py::arg("t"), py::arg("restarts") = 32, py::arg("seed") = 0);
  m.def("wh_violation", [](int d, int t) { return report_dict(wh_violation(d, t)); }, py::arg("d"), py::arg("t"));
  m.def("ep_hat_probe", [](std::array<double, 3> lam, std::array<double, 3> t) {
        const EpHatProbe p = ep_hat_probe({lam, t});
        py::dict d;
        d["b"] = Eigen::Matrix4d(p.b);
        d["unit_basis"] = Eigen::Matrix4d(p.unit_basis);
        d["ep_hat"] = p.ep_hat;
        return d;
      }, py::arg("lam"), py::arg("t"));
  m.def("run_suite", [](const std::string& theorem, int cases, std::vector<int> t_values, std::uint64_t seed,
                        int restarts) {
        SuiteConfig sc;
        sc.theorem = theorem;
        sc.cases = cases;
        sc.t_values = std::move(t_values);
        sc.master_seed = seed;
        sc.optimizer.restarts = restarts;
        return reports_jsonl(run_suite(sc).reports);
      }, py::arg("theorem"), py::arg("cases"), py::arg("t_values"), py::arg("seed") = 0, py::arg("restarts") = 32);
}
