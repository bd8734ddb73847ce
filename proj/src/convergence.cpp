#include "annealroot/convergence.hpp"

#include <cmath>

#include "annealroot/error.hpp"

namespace annealroot {

OrderEstimate estimate_order(std::span<const Complex> trace, double epsilon) {
  OrderEstimate est;
  if (trace.size() < 2) return est;

  // Displacements up to (not including) the first one below epsilon.
  std::vector<double> e;
  for (std::size_t n = 1; n < trace.size(); ++n) {
    const double d = std::abs(trace[n] - trace[n - 1]);
    if (d < epsilon) break;
    e.push_back(d);
  }
  if (e.size() < 3) return est;

  for (std::size_t n = 1; n + 1 < e.size(); ++n) {
    const double num = std::log(e[n + 1] / e[n]);
    const double den = std::log(e[n] / e[n - 1]);
    if (!std::isfinite(num) || !std::isfinite(den) || den == 0.0) continue;
    est.q_series.push_back(num / den);
  }
  if (est.q_series.empty()) return est;

  est.q_final = est.q_series.back();
  est.valid = static_cast<int>(trace.size()) - 1 >= kMinOrderSteps;
  return est;
}

std::optional<OrderSample> order_from_grid(const ScalarProblem& p, const GridSpec& grid,
                                           const BetaSchedule& sched,
                                           const IterationConfig& cfg) {
  grid.validate();
  IterationConfig traced = cfg;
  traced.trace = true;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Complex z0 = grid.point(i, j);
      IterationOutcome o = iterate(p, z0, sched, traced);
      if (o.status != Status::Converged || o.iterations < kMinOrderSteps) continue;
      OrderEstimate est = estimate_order(*o.trace, cfg.epsilon);
      return OrderSample{z0, std::move(o), std::move(est)};
    }
  }
  return std::nullopt;
}

double CubeRootWindow::multiplier(double beta) {
  return -2.0 + 3.0 * std::cbrt(2.0) * beta;
}

double CubeRootWindow::contraction(double beta) { return std::abs(multiplier(beta)); }

CubeRootWindow cube_root_window() {
  const double c = std::cbrt(2.0);
  return {1.0 / (3.0 * c), 1.0 / c, c * c / 3.0};
}

ScalarProblem cube_root_problem() {
  return {
      "cbrt",
      [](Complex z) { return Complex{std::cbrt(z.real()), 0.0}; },
      // +inf at 0 makes f/f' vanish there, so a step from 0 stays at 0.
      [](Complex z) {
        const double a = std::abs(z.real());
        return Complex{1.0 / (3.0 * std::cbrt(a * a)), 0.0};
      },
      [](Complex z) {
        const double x = z.real();
        const double a = std::abs(x);
        return Complex{-2.0 / (9.0 * x * std::cbrt(a * a)), 0.0};
      },
      {0.0},
      "x^(1/3)",
  };
}

Complex analytic_error_ratio(const ScalarProblem& p, Complex root, double beta) {
  if (!p.deriv2) {
    throw Error(ErrorCode::DegenerateInput, "problem has no second derivative");
  }
  const Complex d1 = p.deriv(root);
  if (std::abs(d1) <= 1e-10) {
    throw Error(ErrorCode::DegenerateInput,
                "degenerate root: quadratic error ratio inapplicable");
  }
  return (1.0 - beta) / 2.0 * (*p.deriv2)(root) / d1;
}

double local_error_ratio(const ScalarProblem& p, Complex root, double beta,
                         std::span<const Complex> trace) {
  // Validates the root before looking at the trace.
  (void)analytic_error_ratio(p, root, beta);
  for (std::size_t n = trace.size(); n-- > 1;) {
    const Complex en = trace[n - 1] - root;
    const double a = std::abs(en);
    if (a > 1e-7 && a < 1e-3) {
      return ((trace[n] - root) / (en * en)).real();
    }
  }
  throw Error(ErrorCode::InvalidArgument,
              "no trace pair within (1e-7, 1e-3) of the root");
}

}  // namespace annealroot
