#pragma once

#include <optional>
#include <span>
#include <vector>

#include "annealroot/grid.hpp"
#include "annealroot/iteration.hpp"
#include "annealroot/problem.hpp"

namespace annealroot {

/// Approximate computational order of convergence (ACOC) of one trace.
struct OrderEstimate {
  std::vector<double> q_series;
  double q_final = 0.0;
  bool valid = false;
};

/// q_n = log|e_{n+1}/e_n| / log|e_n/e_{n-1}| with e_n = z_n - z_{n-1}.
///
/// Only displacements with |e| >= epsilon take part; the series ends at the
/// first sub-epsilon displacement and q_final is its last element. Terms
/// whose logarithms are undefined (zero displacement, zero denominator) are
/// skipped. valid requires a non-empty series from a trace with at least
/// eight steps.
OrderEstimate estimate_order(std::span<const Complex> trace, double epsilon = 1e-14);

/// Minimum number of steps a trace needs before its order estimate counts.
inline constexpr int kMinOrderSteps = 8;

struct OrderSample {
  Complex start;
  IterationOutcome outcome;
  OrderEstimate estimate;
};

/// Scans the grid row-major and estimates the order from the first start
/// that converges after at least kMinOrderSteps steps. nullopt if none does.
std::optional<OrderSample> order_from_grid(const ScalarProblem& p, const GridSpec& grid,
                                           const BetaSchedule& sched,
                                           const IterationConfig& cfg);

/// Closed-form analysis of the two-step update on f(x) = x^(1/3), where the
/// map is exactly x_{n+1} = (-2 + 3 * 2^(1/3) * beta) x_n.
struct CubeRootWindow {
  double lower;     ///< 1 / (3 * 2^(1/3))
  double upper;     ///< 1 / 2^(1/3)
  double beta_min;  ///< 2^(2/3) / 3, where the multiplier vanishes

  static double multiplier(double beta);
  /// |x_{n+1} / x_n| predicted for the given beta.
  static double contraction(double beta);
  bool converges(double beta) const { return beta > lower && beta < upper; }
};

CubeRootWindow cube_root_window();

/// Real cube root sign(x)|x|^(1/3) on the real axis; imaginary parts are ignored.
ScalarProblem cube_root_problem();

/// Empirical (z_{n+1} - r) / (z_n - r)^2 from the last trace pair with
/// |z_n - r| in (1e-7, 1e-3). Returns the real part; the limit equals
/// (1 - beta)/2 * f''(r)/f'(r), which is real for real roots of real functions.
///
/// Throws Error(DegenerateInput) when f'(r) vanishes or deriv2 is absent, and
/// Error(InvalidArgument) when no trace pair lies in the window.
double local_error_ratio(const ScalarProblem& p, Complex root, double beta,
                         std::span<const Complex> trace);

/// (1 - beta)/2 * f''(r)/f'(r).
Complex analytic_error_ratio(const ScalarProblem& p, Complex root, double beta);

}  // namespace annealroot
