#include <accdngd/error.hpp>
#include <accdngd/harness.hpp>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace accdngd;

namespace {

py::dict trace_columns(const std::vector<TraceRecord>& trace) {
  const auto n = static_cast<Eigen::Index>(trace.size());
  Vector t(n), avg(n), worst(n), cy(n), cs(n), g(n), eta(n), alpha(n), comm(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& r = trace[static_cast<std::size_t>(k)];
    t(k) = static_cast<double>(r.t);
    avg(k) = r.avg_obj_err;
    worst(k) = r.max_individual_err;
    cy(k) = r.consensus_y;
    cs(k) = r.consensus_s;
    g(k) = r.grad_norm;
    eta(k) = r.eta_t;
    alpha(k) = r.alpha_t;
    comm(k) = static_cast<double>(r.comm_count);
  }
  py::dict d;
  d["t"] = t;
  d["avg_obj_err"] = avg;
  d["max_individual_err"] = worst;
  d["consensus_y"] = cy;
  d["consensus_s"] = cs;
  d["grad_norm"] = g;
  d["eta_t"] = eta;
  d["alpha_t"] = alpha;
  d["comm_count"] = comm;
  return d;
}

StepSchedule make_schedule(const std::string& kind, double value, double t0, double beta) {
  if (kind == "fixed") return StepSchedule::fixed(value);
  if (kind == "vanishing") return StepSchedule::vanishing(value, t0, beta);
  if (kind == "harmonic") return StepSchedule::harmonic(value);
  if (kind == "invsqrt") return StepSchedule::inv_sqrt(value);
  throw Error(ErrorKind::InvalidParam, "unknown schedule `" + kind + "`");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Accelerated distributed Nesterov gradient methods over simulated networks";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  // graphs
  py::class_<Graph>(m, "Graph")
      .def(py::init<int, std::vector<Edge>>(), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("edges", &Graph::edges)
      .def("degree", &Graph::degree)
      .def("connected", &Graph::connected);

  m.def("gen_erdos_renyi", [](int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    return gen_erdos_renyi(n, p, rng);
  }, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("gen_k_cycle", &gen_k_cycle, py::arg("n"), py::arg("k"));
  m.def("gen_grid2d", &gen_grid2d, py::arg("rows"), py::arg("cols"));
  m.def("graph_from_spec", [](const std::string& spec, std::uint64_t seed) {
    Rng rng(seed);
    return graph_from_spec(spec, rng);
  }, py::arg("spec"), py::arg("seed") = 1);
  m.def("laplacian_weights", [](const Graph& g) { return laplacian_weights(g).w(); });
  m.def("metropolis_weights", [](const Graph& g) { return metropolis_weights(g).w(); });
  m.def("second_singular", &second_singular, py::arg("w"));

  // objectives
  py::class_<ObjectiveSuite>(m, "ObjectiveSuite")
      .def_property_readonly("case", [](const ObjectiveSuite& s) { return static_cast<int>(s.kind); })
      .def_readonly("n", &ObjectiveSuite::n)
      .def_readonly("dim", &ObjectiveSuite::dim)
      .def_readonly("L", &ObjectiveSuite::L)
      .def_readonly("mu", &ObjectiveSuite::mu)
      .def_readonly("fstar", &ObjectiveSuite::fstar)
      .def_readonly("xstar", &ObjectiveSuite::xstar)
      .def("value", [](const ObjectiveSuite& s, const RowVector& x) { return global_value(s, x); })
      .def("grad", [](const ObjectiveSuite& s, const RowVector& x) { return global_grad(s, x); })
      .def("local_value", [](const ObjectiveSuite& s, int i, const RowVector& x) { return local_value(s, i, x); })
      .def("local_grad", [](const ObjectiveSuite& s, int i, const RowVector& x) { return local_grad(s, i, x); })
      .def("excess", [](const ObjectiveSuite& s, const RowVector& x) { return excess(s, x, s.fstar); });

  m.def("gen_case1", [](int n, int samples, int dim, std::uint64_t seed) {
    Rng rng(seed);
    return gen_case1(n, samples, dim, rng);
  }, py::arg("n"), py::arg("samples_per_agent") = 50, py::arg("dim") = 3, py::arg("seed") = 1);
  m.def("gen_case2", [](int n, int samples, int dim, std::uint64_t seed) {
    Rng rng(seed);
    return gen_case2(n, samples, dim, rng);
  }, py::arg("n"), py::arg("samples_per_agent") = 100, py::arg("dim") = 3, py::arg("seed") = 1);
  m.def("gen_case3", [](int n, int dim, std::uint64_t seed) {
    Rng rng(seed);
    return gen_case3(n, dim, rng);
  }, py::arg("n"), py::arg("dim") = 4, py::arg("seed") = 1);

  // algorithms
  py::class_<AlgoState>(m, "AlgoState")
      .def_property_readonly("kind", [](const AlgoState& s) { return std::string(to_string(s.kind)); })
      .def_readonly("t", &AlgoState::t)
      .def_readonly("x", &AlgoState::x)
      .def_readonly("v", &AlgoState::v)
      .def_readonly("y", &AlgoState::y)
      .def_readonly("s", &AlgoState::s)
      .def_readonly("alpha", &AlgoState::alpha)
      .def_readonly("eta", &AlgoState::eta)
      .def_readonly("comm_count", &AlgoState::comm_count)
      .def("copy", [](const AlgoState& s) { return AlgoState(s); });

  m.def("init_acc_dngd_sc", [](const ObjectiveSuite& s, double eta, const Matrix& x0) {
    return init_acc_dngd_sc(s, eta, x0);
  }, py::arg("suite"), py::arg("eta"), py::arg("x0"));
  m.def("init_acc_dngd_nsc", [](const ObjectiveSuite& s, const std::string& schedule, double eta, const Matrix& x0,
                                double beta, double t0, bool exact) {
    return init_acc_dngd_nsc(s, make_schedule(schedule, eta, t0, beta), exact ? InitMode::Exact : InitMode::Relaxed,
                             x0);
  }, py::arg("suite"), py::arg("schedule"), py::arg("eta"), py::arg("x0"), py::arg("beta") = 0.0,
        py::arg("t0") = 1.0, py::arg("exact") = false);
  m.def("init_cgd", [](const ObjectiveSuite& s, double eta, const RowVector& x0) { return init_cgd(s, eta, x0); },
        py::arg("suite"), py::arg("eta"), py::arg("x0"));
  m.def("init_cngd_sc", [](const ObjectiveSuite& s, double eta, const RowVector& x0) {
    return init_cngd_sc(s, eta, x0);
  }, py::arg("suite"), py::arg("eta"), py::arg("x0"));
  m.def("init_extra", &init_extra, py::arg("suite"), py::arg("eta"), py::arg("x0"));
  m.def("init_dng", &init_dng, py::arg("suite"), py::arg("c"), py::arg("x0"));
  m.def("init_acc_dgd", [](const ObjectiveSuite& s, double eta, const Matrix& x0) {
    return init_acc_dgd(s, StepSchedule::fixed(eta), x0);
  }, py::arg("suite"), py::arg("eta"), py::arg("x0"));
  m.def("init_dgd", [](const ObjectiveSuite& s, double c, const Matrix& x0) {
    return init_dgd(s, StepSchedule::inv_sqrt(c), x0);
  }, py::arg("suite"), py::arg("c"), py::arg("x0"));

  m.def("step", [](AlgoState& st, const ObjectiveSuite& s, const Matrix& w) { step(st, s, w); },
        py::arg("state"), py::arg("suite"), py::arg("w"));
  m.def("record", [](const AlgoState& st, const ObjectiveSuite& s) {
    return trace_columns({record(st, s, s.fstar)});
  }, py::arg("state"), py::arg("suite"));
  m.def("next_alpha", &next_alpha, py::arg("alpha"), py::arg("eta"), py::arg("eta_next"));
  m.def("bound_thm3", &bound_thm3, py::arg("sigma"), py::arg("L"), py::arg("mu"));
  m.def("bound_thm5", &bound_thm5, py::arg("sigma"), py::arg("L"), py::arg("mu"));

  // analysis
  m.def("loglog_slope", py::overload_cast<const std::vector<double>&, const std::vector<double>&, double, double>(
                            &loglog_slope),
        py::arg("t"), py::arg("err"), py::arg("t_min"), py::arg("t_max"));
  m.def("tracking_residual", &tracking_residual, py::arg("state"));

  py::class_<CertReport>(m, "CertReport")
      .def_readonly("violations", &CertReport::violations)
      .def_readonly("max_eig_residual", &CertReport::max_eig_residual)
      .def_readonly("max_poly_residual", &CertReport::max_poly_residual)
      .def_readonly("lambda_slope", &CertReport::lambda_slope)
      .def_property_readonly("checks", [](const CertReport& r) { return r.rows.size(); });
  m.def("certify_lemma5", [](double sigma, double L, double mu, int samples, std::uint64_t seed) {
    Rng rng(seed);
    return certify_lemma5(sigma, L, mu, samples, rng);
  }, py::arg("sigma"), py::arg("L"), py::arg("mu"), py::arg("samples") = 100, py::arg("seed") = 1);
  m.def("certify_lemmas8_10", [](double sigma, double L, int samples, std::uint64_t seed) {
    Rng rng(seed);
    return certify_lemmas8_10(sigma, L, samples, rng);
  }, py::arg("sigma"), py::arg("L"), py::arg("samples") = 100, py::arg("seed") = 1);
  m.def("certify_lemma12", &certify_lemma12, py::arg("eta"), py::arg("t0"), py::arg("beta"), py::arg("L"),
        py::arg("horizon"));

  // harness
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("iterations", &ExperimentConfig::iterations)
      .def_readwrite("record_every", &ExperimentConfig::record_every)
      .def_readwrite("graph", &ExperimentConfig::graph)
      .def_property_readonly("labels", [](const ExperimentConfig& c) {
        std::vector<std::string> out;
        for (const auto& a : c.algorithms) out.push_back(a.label);
        return out;
      })
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });
  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
  m.def("emit_config", &emit_config, py::arg("config"));

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("sigma", &ExperimentResult::sigma)
      .def_readonly("L", &ExperimentResult::L)
      .def_readonly("mu", &ExperimentResult::mu)
      .def_readonly("fstar", &ExperimentResult::fstar)
      .def_property_readonly("labels", [](const ExperimentResult& r) {
        std::vector<std::string> out;
        for (const auto& a : r.runs) out.push_back(a.label);
        return out;
      })
      .def("trace", [](const ExperimentResult& r, const std::string& label) {
        for (const auto& a : r.runs)
          if (a.label == label) return trace_columns(a.trace);
        throw py::key_error(label);
      })
      .def("diverged", [](const ExperimentResult& r, const std::string& label) {
        for (const auto& a : r.runs)
          if (a.label == label) return a.summary.diverged;
        throw py::key_error(label);
      });
  m.def("run", &run, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("emit_csv", &emit_csv, py::arg("result"), py::arg("directory"));
}
