#pragma once

// Time evolution under H(s): instantaneous ground-state tracking (the
// adiabatic approximation) and full Schroedinger propagation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adiabatic/error.hpp"
#include "adiabatic/hamiltonian.hpp"
#include "adiabatic/linalg.hpp"
#include "adiabatic/schedule.hpp"

namespace adiabatic {

/// |<a|b>|^2
inline double fidelity(const QState& a, const QState& b) { return std::norm(inner(a, b)); }

struct EvolutionSample {
  double s = 0.0;
  QState state;
  double fidelity_ground = 0.0;  ///< |<E0;s|psi(s)>|^2
  double fidelity_marked = 0.0;  ///< |<m|psi(s)>|^2
  double norm_drift = 0.0;       ///< | ||psi|| - 1 | before renormalizing the record
};

struct EvolutionTrace {
  std::vector<EvolutionSample> samples;
  /// Total physical time; infinite for pure adiabatic tracking.
  double duration = std::numeric_limits<double>::infinity();

  [[nodiscard]] const EvolutionSample& final() const { return samples.back(); }
  [[nodiscard]] double max_norm_drift() const {
    double d = 0.0;
    for (const auto& p : samples) d = std::max(d, p.norm_drift);
    return d;
  }
};

/// The instantaneous ground state at each node of a uniform grid. Phases are
/// chosen so consecutive samples have real positive overlap; the first sample
/// keeps the eigensolver gauge.
inline EvolutionTrace ground_state_trace(const SearchProblem& problem, const Schedule& schedule,
                                         int grid_points,
                                         SpectralMethod method = SpectralMethod::subspace) {
  if (grid_points < 2) {
    throw Error(Errc::invalid_argument, "ground-state trace needs at least two grid points");
  }
  EvolutionTrace out;
  out.samples.reserve(std::size_t(grid_points));
  const SubspaceModel model(problem);
  const Index m = problem.marked();
  Vector previous;
  for (int k = 0; k < grid_points; ++k) {
    const double s = double(k) / double(grid_points - 1);
    Vector v = method == SpectralMethod::dense
                   ? low_levels(problem, schedule, s, SpectralMethod::dense).ground
                   : detail::low_levels_subspace(model, schedule.f(s), schedule.g(s),
                                                 schedule.df(s), schedule.dg(s))
                         .ground;
    if (previous.size() != 0) {
      const cplx overlap = previous.dot(v);
      if (std::abs(overlap) > 0.0) v *= std::conj(overlap) / std::abs(overlap);
    }
    const double drift = std::abs(v.norm() - 1.0);
    out.samples.push_back(EvolutionSample{s, QState::normalized(problem.qubits(), v), 1.0,
                                          std::norm(v(m)) / v.squaredNorm(), drift});
    previous = std::move(v);
  }
  return out;
}

/// Steps for propagate when none are given: max(1024, ceil(64 T)).
inline int default_steps(double T) {
  const double wanted = std::ceil(64.0 * T);
  if (!(wanted < 2e9)) throw Error(Errc::invalid_argument, "T too large for default stepping");
  return std::max(1024, int(wanted));
}

inline constexpr double norm_drift_limit = 1e-6;

struct PropagationOptions {
  /// Record every n-th step (the first and last steps are always recorded).
  int record_every = 1;
  SpectralMethod method = SpectralMethod::subspace;
};

/// Solves i d|psi>/dt = H(t/T)|psi> from |psi0> over [0, T] with `steps`
/// exact midpoint unitaries U_k = exp(-i H(s_k + ds/2) T ds).
///
/// The subspace method applies each U_k through the 2x2 reduction (exact,
/// O(1) per step); the dense method diagonalizes the full midpoint matrix.
inline EvolutionTrace propagate(const SearchProblem& problem, const Schedule& schedule, double T,
                                int steps, const PropagationOptions& options = {}) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(Errc::invalid_argument, "propagation time must be positive and finite");
  }
  if (steps < 16) throw Error(Errc::invalid_argument, "propagation needs at least 16 steps");
  const int every = std::max(1, options.record_every);
  const bool dense = options.method == SpectralMethod::dense;
  const double ds = 1.0 / steps;
  const Index m = problem.marked();
  const SubspaceModel model(problem);

  // Subspace state: coordinates in the active span plus the orthogonal
  // remainder, which only picks up the bulk phase.
  Vector coords = model.project(problem.initial().amplitudes());
  Vector remainder = problem.initial().amplitudes() - model.lift(coords);
  double bulk_phase = 0.0;
  Vector full = problem.initial().amplitudes();

  EvolutionTrace out;
  out.duration = T;
  out.samples.reserve(std::size_t(steps / every + 2));

  auto current = [&]() -> Vector {
    if (dense) return full;
    return model.lift(coords) + std::polar(1.0, -bulk_phase) * remainder;
  };
  auto record = [&](double s) {
    const Vector psi = current();
    const double drift = std::abs(psi.norm() - 1.0);
    if (!(drift <= norm_drift_limit)) {
      throw Error(Errc::step_too_coarse,
                  "norm drift " + std::to_string(drift) + " at s = " + std::to_string(s));
    }
    const Vector ground = dense ? low_levels(problem, schedule, s, SpectralMethod::dense).ground
                                : detail::low_levels_subspace(model, schedule.f(s), schedule.g(s),
                                                              schedule.df(s), schedule.dg(s))
                                      .ground;
    const double n2 = psi.squaredNorm();
    out.samples.push_back(EvolutionSample{s, QState::normalized(problem.qubits(), psi),
                                          std::norm(ground.dot(psi)) / n2, std::norm(psi(m)) / n2,
                                          drift});
  };

  record(0.0);
  for (int k = 0; k < steps; ++k) {
    const double mid = (k + 0.5) * ds;
    const double f = schedule.f(mid), g = schedule.g(mid);
    const double dt = T * ds;
    if (dense) {
      const EigenDecomposition eig = hermitian_eig(hamiltonian_at(problem, schedule, mid));
      Vector phases(eig.size());
      for (Index j = 0; j < eig.size(); ++j) phases(j) = std::polar(1.0, -eig.eigenvalues(j) * dt);
      full = eig.eigenvectors * phases.cwiseProduct(eig.eigenvectors.adjoint() * full);
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(model.compress(f, g));
      const Matrix& u = solver.eigenvectors();
      Vector phases(u.cols());
      for (Index j = 0; j < u.cols(); ++j) {
        phases(j) = std::polar(1.0, -solver.eigenvalues()(j) * dt);
      }
      coords = u * phases.cwiseProduct(u.adjoint() * coords);
      bulk_phase += SubspaceModel::bulk_level(f, g) * dt;
    }
    const int done = k + 1;
    if (done == steps || done % every == 0) record(done == steps ? 1.0 : done * ds);
  }
  return out;
}

inline EvolutionTrace propagate(const SearchProblem& problem, const Schedule& schedule, double T,
                                const PropagationOptions& options = {}) {
  return propagate(problem, schedule, T, default_steps(T), options);
}

}  // namespace adiabatic
