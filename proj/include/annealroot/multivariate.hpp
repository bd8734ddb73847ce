#pragma once

#include <functional>

#include <Eigen/Dense>

#include "annealroot/iteration.hpp"

namespace annealroot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct VectorProblem {
  int dim = 0;
  std::function<Vector(const Vector&)> residual;
  std::function<Matrix(const Vector&)> jacobian;
};

/// Jacobians whose estimated condition number exceeds this are rejected.
inline constexpr double kMaxCondition = 1e14;

/// Scalar defaults with the looser displacement threshold used for systems.
inline IterationConfig default_vector_config() {
  IterationConfig cfg;
  cfg.epsilon = 1e-12;
  return cfg;
}

/// Vector form of the two-step update. J = jacobian(phi) is factored once
/// and reused for both solves:
///   J d1 = F(phi),  phi_hat = phi - d1,  J d2 = F(phi_hat),  return phi_hat - beta d2.
/// Throws Error(SingularJacobian) when J is singular or ill-conditioned.
Vector vector_extended_step(const VectorProblem& vp, const Vector& phi, double beta);

/// One classical Newton step phi - J^{-1} F(phi), for reference checks.
Vector vector_newton_step(const VectorProblem& vp, const Vector& phi);

struct VectorOutcome {
  Status status = Status::MaxIterations;
  Vector final;
  int iterations = 0;
};

/// Repeats vector_extended_step until the max-norm displacement drops below
/// cfg.epsilon. Only Fixed schedules are supported for systems; Annealing
/// throws Error(InvalidArgument). Singular Jacobians propagate as errors.
VectorOutcome vector_iterate(const VectorProblem& vp, const Vector& phi0,
                             const BetaSchedule& sched, const IterationConfig& cfg);

}  // namespace annealroot
