#include "annealroot/multivariate.hpp"

#include <cmath>

#include "annealroot/error.hpp"

namespace annealroot {
namespace {

Eigen::PartialPivLU<Matrix> factor(const VectorProblem& vp, const Vector& phi) {
  const Matrix j = vp.jacobian(phi);
  if (j.rows() != vp.dim || j.cols() != vp.dim || !j.allFinite()) {
    throw Error(ErrorCode::SingularJacobian, "singular Jacobian at iterate");
  }
  Eigen::PartialPivLU<Matrix> lu(j);
  const double rcond = lu.rcond();
  if (!(rcond * kMaxCondition >= 1.0)) {
    throw Error(ErrorCode::SingularJacobian, "singular Jacobian at iterate");
  }
  return lu;
}

}  // namespace

Vector vector_extended_step(const VectorProblem& vp, const Vector& phi, double beta) {
  const auto lu = factor(vp, phi);
  const Vector phi_hat = phi - lu.solve(vp.residual(phi));
  return phi_hat - beta * lu.solve(vp.residual(phi_hat));
}

Vector vector_newton_step(const VectorProblem& vp, const Vector& phi) {
  return phi - factor(vp, phi).solve(vp.residual(phi));
}

VectorOutcome vector_iterate(const VectorProblem& vp, const Vector& phi0,
                             const BetaSchedule& sched, const IterationConfig& cfg) {
  cfg.validate();
  if (sched.is_annealing()) {
    throw Error(ErrorCode::InvalidArgument, "annealing schedule is scalar-only");
  }
  if (phi0.size() != vp.dim || !phi0.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "initial vector has wrong size or is not finite");
  }
  VectorOutcome out;
  out.final = phi0;
  for (int n = 0; n < cfg.max_iter; ++n) {
    Vector next = vector_extended_step(vp, out.final, sched.beta());
    if (!next.allFinite()) {
      out.status = Status::NumericalFailure;
      return out;
    }
    const double disp = (next - out.final).lpNorm<Eigen::Infinity>();
    out.final = std::move(next);
    out.iterations = n + 1;
    if (disp < cfg.epsilon) {
      out.status = Status::Converged;
      return out;
    }
  }
  out.status = Status::MaxIterations;
  return out;
}

}  // namespace annealroot
