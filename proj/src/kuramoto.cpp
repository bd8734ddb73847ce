#include "annealroot/kuramoto.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "annealroot/error.hpp"

namespace annealroot {

void KuramotoSystem::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::MalformedInput, what); };
  if (n_rotors < 2) bad("kuramoto system needs n >= 2");
  if (gamma.rows() != n_rotors || gamma.cols() != n_rotors || psi.rows() != n_rotors ||
      psi.cols() != n_rotors) {
    bad("gamma and psi must be n x n");
  }
  if (!gamma.allFinite() || !psi.allFinite() || !std::isfinite(kappa)) {
    bad("kuramoto entries must be finite");
  }
  if (!(kappa > 0.0)) bad("kappa must be positive");
  for (int i = 0; i < n_rotors; ++i) {
    if (gamma(i, i) != 0.0) bad("gamma must have a zero diagonal");
  }
}

double rotor_drive(const KuramotoSystem& sys, const Vector& phases, int i) {
  double s = 0.0;
  for (int j = 0; j < sys.n_rotors; ++j) {
    if (j == i) continue;
    s += sys.gamma(i, j) * std::sin(phases[i] - phases[j] + sys.psi(i, j));
  }
  return s;
}

namespace {

// Full phase vector with the gauge phi_0 = 0 prepended.
Vector with_gauge(const Vector& reduced) {
  Vector phases(reduced.size() + 1);
  phases[0] = 0.0;
  phases.tail(reduced.size()) = reduced;
  return phases;
}

// sum_{j != 0} gamma_0j sin(psi_0j - phi_j), i.e. omega / kappa.
double reference_drive(const KuramotoSystem& sys, const Vector& phases) {
  double s = 0.0;
  for (int j = 1; j < sys.n_rotors; ++j) {
    s += sys.gamma(0, j) * std::sin(sys.psi(0, j) - phases[j]);
  }
  return s;
}

}  // namespace

VectorProblem build_kuramoto_problem(const KuramotoSystem& sys) {
  sys.validate();
  const int m = sys.n_rotors - 1;
  VectorProblem vp;
  vp.dim = m;
  vp.residual = [sys, m](const Vector& phi) {
    const Vector phases = with_gauge(phi);
    const double d = reference_drive(sys, phases);
    Vector r(m);
    for (int i = 1; i <= m; ++i) r[i - 1] = d - rotor_drive(sys, phases, i);
    return r;
  };
  vp.jacobian = [sys, m](const Vector& phi) {
    const Vector phases = with_gauge(phi);
    Matrix jac(m, m);
    for (int i = 1; i <= m; ++i) {
      double diag = 0.0;
      for (int j = 0; j < sys.n_rotors; ++j) {
        if (j != i) diag += sys.gamma(i, j) * std::cos(phases[i] - phases[j] + sys.psi(i, j));
      }
      for (int k = 1; k <= m; ++k) {
        const double d_ref = -sys.gamma(0, k) * std::cos(sys.psi(0, k) - phases[k]);
        const double d_fi =
            k == i ? diag : -sys.gamma(i, k) * std::cos(phases[i] - phases[k] + sys.psi(i, k));
        jac(i - 1, k - 1) = d_ref - d_fi;
      }
    }
    return jac;
  };
  return vp;
}

double omega_from_phases(const KuramotoSystem& sys, const Vector& phases) {
  if (phases.size() != sys.n_rotors || phases[0] != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "phases must have length n and phases[0] = 0");
  }
  return sys.kappa * reference_drive(sys, phases);
}

SyncSolution solve_sync(const KuramotoSystem& sys, const Vector& phi0,
                        const BetaSchedule& sched, const IterationConfig& cfg) {
  const VectorProblem vp = build_kuramoto_problem(sys);
  const VectorOutcome out = vector_iterate(vp, phi0, sched, cfg);

  SyncSolution sol;
  sol.iterations = out.iterations;
  sol.status = out.status;
  sol.phases = with_gauge(out.final);
  sol.omega = omega_from_phases(sys, sol.phases);
  sol.residual_norm = vp.residual(out.final).lpNorm<Eigen::Infinity>();

  if (sol.status == Status::Converged) {
    const double tol = kSyncTolerance * std::max(1.0, sys.kappa);
    for (int i = 0; i < sys.n_rotors; ++i) {
      if (!(std::abs(sys.kappa * rotor_drive(sys, sol.phases, i) - sol.omega) < tol)) {
        sol.status = Status::NumericalFailure;
        break;
      }
    }
  }
  return sol;
}

SyncSolution solve_sync_with_restarts(const KuramotoSystem& sys, const BetaSchedule& sched,
                                      const IterationConfig& cfg, int restarts,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const int m = sys.n_rotors - 1;
  SyncSolution last;
  for (int attempt = 0; attempt <= restarts; ++attempt) {
    Vector phi0 = Vector::Zero(m);
    if (attempt > 0) {
      for (int k = 0; k < m; ++k) phi0[k] = angle(rng);
    }
    try {
      last = solve_sync(sys, phi0, sched, cfg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularJacobian) throw;
      last = SyncSolution{};
      last.phases = with_gauge(phi0);
      last.status = Status::NumericalFailure;
    }
    if (last.status == Status::Converged) return last;
  }
  return last;
}

KuramotoSystem random_kuramoto_system(int n_rotors, std::uint64_t seed, double kappa) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::uniform_real_distribution<double> delay(-0.5, 0.5);
  KuramotoSystem sys;
  sys.n_rotors = n_rotors;
  sys.kappa = kappa;
  sys.gamma = Matrix::Zero(n_rotors, n_rotors);
  sys.psi = Matrix::Zero(n_rotors, n_rotors);
  for (int i = 0; i < n_rotors; ++i) {
    for (int j = 0; j < n_rotors; ++j) {
      if (i == j) continue;
      sys.gamma(i, j) = weight(rng);
      sys.psi(i, j) = delay(rng);
    }
  }
  sys.validate();
  return sys;
}

double sync_variance(const KuramotoSystem& sys, const SyncSolution& sol) {
  std::vector<double> v;
  v.reserve(sys.n_rotors + 1);
  for (int i = 0; i < sys.n_rotors; ++i) {
    v.push_back(sys.kappa * rotor_drive(sys, sol.phases, i));
  }
  v.push_back(sol.omega);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

namespace {

Matrix matrix_from_json(const nlohmann::json& j, const char* key, int n) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(ErrorCode::MalformedInput, std::string("missing array '") + key + "'");
  }
  const auto& a = j[key];
  if (a.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorCode::MalformedInput,
                std::string("'") + key + "' must hold n*n row-major entries");
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const auto& v = a[static_cast<std::size_t>(r) * n + c];
      if (!v.is_number()) {
        throw Error(ErrorCode::MalformedInput, std::string("'") + key + "' entries must be numbers");
      }
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

std::vector<double> row_major(const Matrix& m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

}  // namespace

KuramotoSystem kuramoto_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "kuramoto input must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw Error(ErrorCode::MalformedInput, "missing integer 'n'");
  }
  KuramotoSystem sys;
  sys.n_rotors = j["n"].get<int>();
  if (sys.n_rotors < 2) throw Error(ErrorCode::MalformedInput, "kuramoto system needs n >= 2");
  sys.gamma = matrix_from_json(j, "gamma", sys.n_rotors);
  sys.psi = matrix_from_json(j, "psi", sys.n_rotors);
  if (!j.contains("kappa") || !j["kappa"].is_number()) {
    throw Error(ErrorCode::MalformedInput, "missing number 'kappa'");
  }
  sys.kappa = j["kappa"].get<double>();
  sys.validate();
  return sys;
}

nlohmann::json kuramoto_to_json(const KuramotoSystem& sys) {
  return {{"n", sys.n_rotors},
          {"gamma", row_major(sys.gamma)},
          {"psi", row_major(sys.psi)},
          {"kappa", sys.kappa}};
}

nlohmann::json sync_solution_to_json(const SyncSolution& sol) {
  return {{"phases", std::vector<double>(sol.phases.begin(), sol.phases.end())},
          {"omega", sol.omega},
          {"residual_norm", sol.residual_norm},
          {"status", to_string(sol.status)},
          {"iterations", sol.iterations}};
}

}  // namespace annealroot
