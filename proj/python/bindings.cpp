// pybind11 bindings for the annealroot core.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "annealroot/basin.hpp"
#include "annealroot/convergence.hpp"
#include "annealroot/error.hpp"
#include "annealroot/kuramoto.hpp"
#include "annealroot/report.hpp"

namespace py = pybind11;
using namespace annealroot;

namespace {

/// Accepts a float (fixed beta) or the string "anneal".
BetaSchedule to_schedule(const py::object& beta) {
  if (py::isinstance<py::str>(beta)) return schedule_for(beta.cast<std::string>());
  return BetaSchedule::fixed(beta.cast<double>());
}

IterationConfig make_config(std::optional<double> epsilon, int max_iter, bool trace) {
  IterationConfig cfg;
  if (epsilon) cfg.epsilon = *epsilon;
  cfg.max_iter = max_iter;
  cfg.trace = trace;
  cfg.validate();
  return cfg;
}

GridSpec make_grid(int nx, int ny, std::array<double, 4> bounds) {
  GridSpec g;
  g.nx = nx;
  g.ny = ny;
  g.re_min = bounds[0];
  g.re_max = bounds[1];
  g.im_min = bounds[2];
  g.im_max = bounds[3];
  g.validate();
  return g;
}

py::dict outcome_to_dict(const IterationOutcome& out) {
  py::dict d;
  d["status"] = to_string(out.status);
  d["final"] = out.final;
  d["iterations"] = out.iterations;
  d["evals_f"] = out.evals_f;
  d["evals_fprime"] = out.evals_fprime;
  d["trace"] = out.trace ? py::cast(*out.trace) : py::none();
  return d;
}

py::dict estimate_to_dict(const OrderEstimate& e) {
  py::dict d;
  d["q_series"] = e.q_series;
  d["q_final"] = e.q_final;
  d["valid"] = e.valid;
  return d;
}

py::dict sync_to_dict(const SyncSolution& s) {
  py::dict d;
  d["phases"] = s.phases;
  d["omega"] = s.omega;
  d["residual_norm"] = s.residual_norm;
  d["status"] = to_string(s.status);
  d["iterations"] = s.iterations;
  return d;
}

py::array_t<int> as_image(const std::vector<int>& cells, const GridSpec& g) {
  py::array_t<int> arr({g.ny, g.nx});
  std::copy(cells.begin(), cells.end(), arr.mutable_data());
  return arr;
}

TableKind table_kind(int kind) {
  if (kind == 1) return TableKind::Table1;
  if (kind == 2) return TableKind::Table2;
  throw Error(ErrorCode::InvalidArgument, "table kind must be 1 or 2");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Annealed two-step Newton-type root finding";

  static py::exception<Error> error_type(m, "AnnealrootError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("code") = static_cast<int>(e.code());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("list_functions", [] {
    py::list out;
    for (const auto& p : list_problems()) {
      py::dict d;
      d["id"] = p.id;
      d["formula"] = p.display;
      d["known_roots"] = p.known_roots;
      out.append(d);
    }
    return out;
  }, "Registered benchmark functions with formulas and known roots.");

  m.def("evaluate", [](const std::string& id, Complex z) {
    const auto& p = find_problem(id);
    return std::make_pair(p.eval(z), p.deriv(z));
  }, py::arg("function"), py::arg("z"), "Returns (f(z), f'(z)).");

  m.def("annealing_beta", py::overload_cast<Complex, Complex>(&annealing_beta),
        py::arg("fprime_n"), py::arg("fprime_hat"));

  m.def("extended_step", [](const std::string& id, Complex x, double beta) -> py::object {
    const auto s = extended_step(find_problem(id), x, beta);
    if (!s) return py::none();
    py::dict d;
    d["newton"] = s->newton;
    d["next"] = s->next;
    return d;
  }, py::arg("function"), py::arg("x"), py::arg("beta"),
     "One two-step update; None when a derivative trips the guard.");

  m.def("iterate", [](const std::string& id, Complex z0, const py::object& beta,
                      std::optional<double> epsilon, int max_iter, bool trace) {
    return outcome_to_dict(iterate(find_problem(id), z0, to_schedule(beta),
                                   make_config(epsilon, max_iter, trace)));
  }, py::arg("function"), py::arg("z0"), py::arg("beta") = 0.0, py::arg("epsilon") = py::none(),
     py::arg("max_iter") = 50, py::arg("trace") = false,
     "Iterates from z0; beta is a float or \"anneal\".");

  py::class_<BasinMap>(m, "BasinMap")
      .def_property_readonly("labels", [](const BasinMap& b) { return as_image(b.labels, b.grid); },
                             "Root index per cell, -1 for divergent; shape (ny, nx), row 0 at im_min.")
      .def_property_readonly("iterations", [](const BasinMap& b) { return as_image(b.iter_counts, b.grid); })
      .def_property_readonly("roots", [](const BasinMap& b) { return b.catalog.roots; })
      .def("entropy", &basin_entropy, py::arg("box") = 20)
      .def("to_ppm", [](const BasinMap& b) {
        const std::string bytes = render_ppm(b, default_palette(b.catalog.roots.size()));
        return py::bytes(bytes);
      }, "Binary PPM image, top row at im_max.");

  m.def("sweep", [](const std::string& id, const py::object& beta, int nx, int ny,
                    std::array<double, 4> bounds, int max_iter, int jobs) {
    IterationConfig cfg = make_config(std::nullopt, max_iter, false);
    SweepOptions opts;
    opts.jobs = jobs;
    const auto& problem = find_problem(id);
    const GridSpec grid = make_grid(nx, ny, bounds);
    const BetaSchedule sched = to_schedule(beta);
    auto [map, metrics] = [&] {
      py::gil_scoped_release release;
      return sweep(problem, grid, sched, cfg, opts);
    }();
    py::dict d;
    d["mean_iterations"] = metrics.mean_iterations;
    d["convergence_pct"] = metrics.convergence_pct;
    d["wall_time_per_point"] = metrics.wall_time_per_point;
    d["total_points"] = metrics.total_points;
    d["converged"] = metrics.converged;
    return std::make_pair(std::move(map), d);
  }, py::arg("function"), py::arg("beta") = 0.0, py::arg("nx") = 1000, py::arg("ny") = 1000,
     py::arg("bounds") = std::array<double, 4>{-2.0, 2.0, -2.0, 2.0}, py::arg("max_iter") = 50,
     py::arg("jobs") = 0, "Basin sweep; returns (BasinMap, metrics dict).");

  m.def("estimate_order", [](const std::vector<Complex>& trace, double epsilon) {
    return estimate_to_dict(estimate_order(trace, epsilon));
  }, py::arg("trace"), py::arg("epsilon") = 1e-14);

  m.def("order_from_grid", [](const std::string& id, const py::object& beta, int nx, int ny) -> py::object {
    const auto s = order_from_grid(find_problem(id), make_grid(nx, ny, {-2.0, 2.0, -2.0, 2.0}),
                                   to_schedule(beta), {});
    if (!s) return py::none();
    py::dict d = estimate_to_dict(s->estimate);
    d["start"] = s->start;
    d["iterations"] = s->outcome.iterations;
    return d;
  }, py::arg("function"), py::arg("beta") = 0.0, py::arg("nx") = 1000, py::arg("ny") = 1000);

  m.def("cube_root_window", [] {
    const auto w = cube_root_window();
    py::dict d;
    d["lower"] = w.lower;
    d["upper"] = w.upper;
    d["beta_min"] = w.beta_min;
    return d;
  });
  m.def("cube_root_contraction", &CubeRootWindow::contraction, py::arg("beta"));

  m.def("random_kuramoto_system", [](int n, std::uint64_t seed, double kappa) {
    const auto s = random_kuramoto_system(n, seed, kappa);
    py::dict d;
    d["gamma"] = s.gamma;
    d["psi"] = s.psi;
    d["kappa"] = s.kappa;
    return d;
  }, py::arg("n"), py::arg("seed"), py::arg("kappa") = 1.0);

  m.def("solve_sync", [](const Matrix& gamma, const Matrix& psi, double kappa, double beta,
                         std::optional<Vector> phi0, int restarts, std::uint64_t seed) {
    KuramotoSystem sys;
    sys.n_rotors = static_cast<int>(gamma.rows());
    sys.gamma = gamma;
    sys.psi = psi;
    sys.kappa = kappa;
    sys.validate();
    const auto sched = BetaSchedule::fixed(beta);
    const SyncSolution sol = phi0 ? solve_sync(sys, *phi0, sched)
                                  : solve_sync_with_restarts(sys, sched, default_vector_config(),
                                                             restarts, seed);
    py::dict d = sync_to_dict(sol);
    d["sync_variance"] = sync_variance(sys, sol);
    return d;
  }, py::arg("gamma"), py::arg("psi"), py::arg("kappa") = 1.0, py::arg("beta") = 0.0,
     py::arg("phi0") = py::none(), py::arg("restarts") = 10, py::arg("seed") = 0,
     "Phase-locked state of N rotors; phi0 has length N-1 (phi_0 is pinned to 0).");

  m.def("table", [](int kind, std::optional<std::vector<std::string>> functions, int nx, int ny,
                    const std::string& format, int jobs) {
    std::vector<ScalarProblem> probs;
    if (functions) {
      for (const auto& id : *functions) probs.push_back(find_problem(id));
    } else {
      probs = list_problems();
    }
    ReportOptions opts;
    opts.sweep.jobs = jobs;
    const auto k = table_kind(kind);
    const auto grid = make_grid(nx, ny, {-2.0, 2.0, -2.0, 2.0});
    std::vector<TableRow> rows;
    {
      py::gil_scoped_release release;
      rows = k == TableKind::Table1 ? build_table1(probs, grid, {}, opts)
                                    : build_table2(probs, grid, {}, opts);
    }
    if (format == "csv") return table_to_csv(rows);
    if (format == "md") return table_to_markdown(rows, k);
    if (format == "json") return table_to_json(rows).dump(2);
    throw Error(ErrorCode::InvalidArgument, "format must be csv, md or json");
  }, py::arg("kind"), py::arg("functions") = py::none(), py::arg("nx") = 1000,
     py::arg("ny") = 1000, py::arg("format") = "csv", py::arg("jobs") = 0,
     "Benchmark table 1 or 2 rendered as csv, md or json.");
}
