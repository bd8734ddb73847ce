#pragma once

#include <optional>
#include <vector>

#include "annealroot/problem.hpp"

namespace annealroot {

/// How each step chooses its beta.
///
/// Fixed uses a constant beta; beta = 0 is classical Newton-Raphson and
/// beta = -1 is allowed but degenerate (fixed points need not be roots).
/// Annealing recomputes beta from f'(x_n) and f'(x_hat) every step.
class BetaSchedule {
 public:
  enum class Mode { Fixed, Annealing };

  static BetaSchedule fixed(double beta);
  static BetaSchedule annealing() { return BetaSchedule(Mode::Annealing, 0.0); }

  Mode mode() const noexcept { return mode_; }
  bool is_annealing() const noexcept { return mode_ == Mode::Annealing; }
  /// Only meaningful for Fixed schedules.
  double beta() const noexcept { return beta_; }
  bool is_degenerate() const noexcept {
    return mode_ == Mode::Fixed && beta_ == -1.0;
  }

 private:
  BetaSchedule(Mode mode, double beta) : mode_(mode), beta_(beta) {}

  Mode mode_;
  double beta_;
};

struct IterationConfig {
  double epsilon = 1e-14;
  int max_iter = 50;
  double deriv_guard = 1e-300;
  bool trace = false;

  /// Throws Error(InvalidArgument) on epsilon <= 0, max_iter < 1 or deriv_guard < 0.
  void validate() const;
};

enum class Status { Converged, MaxIterations, NumericalFailure };

const char* to_string(Status s) noexcept;

struct IterationOutcome {
  Status status = Status::MaxIterations;
  Complex final{};
  int iterations = 0;
  /// z_0..z_n when IterationConfig::trace is set.
  std::optional<std::vector<Complex>> trace;
  /// Evaluations charged to completed steps; a step aborted by the guard is not counted.
  long evals_f = 0;
  long evals_fprime = 0;
};

struct StepResult {
  Complex next;
  Complex newton;  ///< x_hat = N(x)
};

/// One two-step update with a fixed beta:
///   x_hat = x - f(x)/f'(x),  x_next = x_hat - beta f(x_hat)/f'(x).
/// Both divisions use f' at the original point. Returns nullopt when
/// |f'(x)| <= deriv_guard or an intermediate is not finite.
std::optional<StepResult> extended_step(const ScalarProblem& p, Complex x, double beta,
                                        double deriv_guard = 1e-300);

/// Second-order nesting: N(x) - beta f(N(x) - beta f(N(x))/f'(x))/f'(x).
std::optional<Complex> extended_step_order2(const ScalarProblem& p, Complex x, double beta,
                                            double deriv_guard = 1e-300);

/// beta_n = 2 f'_n^2 / (f'_hat^2 + f'_n^2), evaluated in complex arithmetic.
///
/// For real derivatives the result is real and lies in (0, 2]; off the real
/// axis beta_n is complex, which is what keeps the cubic error term cancelled
/// for complex iterates. Throws Error(DegenerateInput) when the denominator
/// vanishes (in particular when both inputs are zero).
Complex annealing_beta(Complex fprime_n, Complex fprime_hat);

/// Real-line form; result in (0, 2] whenever fprime_n != 0.
double annealing_beta(double fprime_n, double fprime_hat);

/// Runs the iteration from x0 until |z_{n+1} - z_n| < epsilon, max_iter
/// steps, or a numerical failure.
IterationOutcome iterate(const ScalarProblem& p, Complex x0, const BetaSchedule& sched,
                         const IterationConfig& cfg);

}  // namespace annealroot
