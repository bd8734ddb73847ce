#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "annealroot/multivariate.hpp"

namespace annealroot {

/// N identical rotors with d(theta_i)/dt = kappa sum_j gamma_ij sin(theta_j - theta_i + psi_ij).
/// gamma may be asymmetric; its diagonal must be zero.
struct KuramotoSystem {
  int n_rotors = 2;
  Matrix gamma;
  Matrix psi;
  double kappa = 1.0;

  void validate() const;
};

/// f_i(phi) = sum_{j != i} gamma_ij sin(phi_i - phi_j + psi_ij) over all N phases.
double rotor_drive(const KuramotoSystem& sys, const Vector& phases, int i);

/// Phase-locking equations over phi_1..phi_{N-1} with phi_0 = 0:
///   F_i = sum_{j != 0} gamma_0j sin(psi_0j - phi_j) - f_i(phi),  i = 1..N-1.
/// kappa scales every equation equally and is dropped.
VectorProblem build_kuramoto_problem(const KuramotoSystem& sys);

/// omega = kappa sum_{j != 0} gamma_0j sin(psi_0j - phi_j); requires phases[0] == 0.
double omega_from_phases(const KuramotoSystem& sys, const Vector& phases);

struct SyncSolution {
  Vector phases;  ///< length N, phases[0] = 0
  double omega = 0.0;
  double residual_norm = 0.0;  ///< max-norm of the reduced residual
  Status status = Status::MaxIterations;
  int iterations = 0;
};

/// Absolute tolerance on |kappa f_i - omega| for a solution to count as synchronized,
/// scaled by max(1, kappa).
inline constexpr double kSyncTolerance = 1e-10;

/// Solves for a globally phase-locked state from phi0 (length N-1).
/// A converged iterate that fails the synchronization check is reported as
/// NumericalFailure. Singular Jacobians throw Error(SingularJacobian).
SyncSolution solve_sync(const KuramotoSystem& sys, const Vector& phi0,
                        const BetaSchedule& sched,
                        const IterationConfig& cfg = default_vector_config());

/// Tries phi0 = 0, then up to `restarts` seeded uniform starts in [-pi, pi).
/// Returns the first converged solution, or the last attempt otherwise.
/// Attempts that hit a singular Jacobian count as NumericalFailure.
SyncSolution solve_sync_with_restarts(const KuramotoSystem& sys, const BetaSchedule& sched,
                                      const IterationConfig& cfg, int restarts,
                                      std::uint64_t seed);

/// Seeded random system: gamma off-diagonal uniform in [0, 1], psi off-diagonal
/// uniform in [-0.5, 0.5], zero diagonals.
KuramotoSystem random_kuramoto_system(int n_rotors, std::uint64_t seed, double kappa = 1.0);

/// Sample variance of {kappa f_i(phases)}_i together with omega.
double sync_variance(const KuramotoSystem& sys, const SyncSolution& sol);

/// {n, gamma: row-major list, psi: row-major list, kappa}.
/// Throws Error(MalformedInput) on missing fields, wrong sizes or non-zero diagonal.
KuramotoSystem kuramoto_from_json(const nlohmann::json& j);
nlohmann::json kuramoto_to_json(const KuramotoSystem& sys);

/// {phases, omega, residual_norm, status, iterations}.
nlohmann::json sync_solution_to_json(const SyncSolution& sol);

}  // namespace annealroot
