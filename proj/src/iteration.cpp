#include "annealroot/iteration.hpp"

#include <cmath>

#include "annealroot/error.hpp"

namespace annealroot {
namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

BetaSchedule BetaSchedule::fixed(double beta) {
  if (!std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite");
  }
  return BetaSchedule(Mode::Fixed, beta);
}

void IterationConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (!(deriv_guard >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "deriv_guard must be >= 0");
  }
}

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Converged: return "converged";
    case Status::MaxIterations: return "max_iterations";
    case Status::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

// 1 + r^2 with r = f'_hat/f'_n; nullopt when beta_n is undefined.
std::optional<Complex> try_annealing_beta(Complex fprime_n, Complex fprime_hat) {
  if (fprime_n == Complex{}) {
    if (fprime_hat == Complex{}) return std::nullopt;
    return Complex{};
  }
  // Ratio form of 2a^2/(b^2 + a^2); avoids overflow of the squares.
  const Complex r = fprime_hat / fprime_n;
  const Complex den = 1.0 + r * r;
  if (den == Complex{}) return std::nullopt;
  return 2.0 / den;
}

// Shared by extended_step and iterate so both run identical arithmetic.
std::optional<StepResult> step_impl(const ScalarProblem& p, Complex x, bool anneal,
                                    double beta, double deriv_guard) {
  const Complex fx = p.eval(x);
  const Complex dfx = p.deriv(x);
  if (!(std::abs(dfx) > deriv_guard) || !finite(fx)) return std::nullopt;
  const Complex x_hat = x - fx / dfx;
  if (!finite(x_hat)) return std::nullopt;
  const Complex f_hat = p.eval(x_hat);
  if (!finite(f_hat)) return std::nullopt;
  Complex next;
  if (anneal) {
    const Complex df_hat = p.deriv(x_hat);
    if (!finite(df_hat)) return std::nullopt;
    const auto b = try_annealing_beta(dfx, df_hat);
    if (!b) return std::nullopt;
    next = x_hat - *b * f_hat / dfx;
  } else {
    next = x_hat - beta * f_hat / dfx;
  }
  if (!finite(next)) return std::nullopt;
  return StepResult{next, x_hat};
}

}  // namespace

std::optional<StepResult> extended_step(const ScalarProblem& p, Complex x, double beta,
                                        double deriv_guard) {
  return step_impl(p, x, false, beta, deriv_guard);
}

std::optional<Complex> extended_step_order2(const ScalarProblem& p, Complex x, double beta,
                                            double deriv_guard) {
  const Complex fx = p.eval(x);
  const Complex dfx = p.deriv(x);
  if (!(std::abs(dfx) > deriv_guard) || !finite(fx)) return std::nullopt;
  const Complex newton = x - fx / dfx;
  const Complex f_newton = p.eval(newton);
  const Complex inner = newton - beta * f_newton / dfx;
  const Complex f_inner = p.eval(inner);
  const Complex next = newton - beta * f_inner / dfx;
  if (!finite(newton) || !finite(inner) || !finite(next)) return std::nullopt;
  return next;
}

Complex annealing_beta(Complex fprime_n, Complex fprime_hat) {
  const auto b = try_annealing_beta(fprime_n, fprime_hat);
  if (!b) throw Error(ErrorCode::DegenerateInput, "degenerate schedule input");
  return *b;
}

double annealing_beta(double fprime_n, double fprime_hat) {
  return annealing_beta(Complex{fprime_n}, Complex{fprime_hat}).real();
}

IterationOutcome iterate(const ScalarProblem& p, Complex x0, const BetaSchedule& sched,
                         const IterationConfig& cfg) {
  IterationOutcome out;
  out.final = x0;
  if (cfg.trace) out.trace.emplace().push_back(x0);
  if (!finite(x0)) {
    out.status = Status::NumericalFailure;
    return out;
  }

  const bool anneal = sched.is_annealing();
  Complex x = x0;
  for (int n = 0; n < cfg.max_iter; ++n) {
    const auto step = step_impl(p, x, anneal, sched.beta(), cfg.deriv_guard);
    if (!step) {
      out.status = Status::NumericalFailure;
      return out;
    }
    out.iterations = n + 1;
    out.evals_f += 2;
    out.evals_fprime += anneal ? 2 : 1;
    out.final = step->next;
    if (out.trace) out.trace->push_back(step->next);

    if (std::abs(step->next - x) < cfg.epsilon) {
      out.status = Status::Converged;
      return out;
    }
    x = step->next;
  }
  out.status = Status::MaxIterations;
  return out;
}

}  // namespace annealroot
