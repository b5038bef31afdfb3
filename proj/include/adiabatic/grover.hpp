#pragma once

// Discrete Grover iteration G = (2|psi0><psi0| - I)(I - 2|m><m|), with the
// diffusion reflection taken about the fixed uniform superposition |psi0>.

#include <cmath>
#include <numbers>
#include <vector>

#include "adiabatic/error.hpp"
#include "adiabatic/hamiltonian.hpp"
#include "adiabatic/linalg.hpp"

namespace adiabatic {

/// Applies the oracle reflection, then the diffusion reflection about the
/// uniform superposition. Uses O(N) work; no matrix is formed.
inline QState grover_step(const QState& state, const SearchProblem& problem) {
  if (state.dim() != problem.dim()) {
    throw Error(Errc::dim_mismatch, "state and search problem dimensions differ");
  }
  Vector v = state.amplitudes();
  v(problem.marked()) = -v(problem.marked());
  // 2|u><u|v> - v with |u> uniform: 2 * mean(v) - v.
  const cplx mean = v.mean();
  v = (2.0 * mean) * Vector::Ones(v.size()) - v;
  return QState(state.qubits(), std::move(v));
}

struct GroverIteration {
  int k = 0;
  double success_probability = 0.0;
};

struct GroverRun {
  Index N = 0;
  Index marked = 0;
  std::vector<GroverIteration> iterations;  ///< k = 0 .. k_max
};

/// round(pi/4 * sqrt(N))
inline int grover_optimal_iterations(Index N) {
  return int(std::lround(std::numbers::pi / 4.0 * std::sqrt(double(N))));
}

/// Iterates from the uniform superposition, recording |<m|psi_k>|^2 for
/// k = 0 .. k_max.
inline GroverRun grover_search(const SearchProblem& problem, int k_max) {
  if (k_max < 1) throw Error(Errc::invalid_argument, "k_max must be at least 1");
  GroverRun run{problem.dim(), problem.marked(), {}};
  run.iterations.reserve(std::size_t(k_max) + 1);
  QState psi = QState::uniform(problem.qubits());
  run.iterations.push_back({0, std::norm(psi[problem.marked()])});
  for (int k = 1; k <= k_max; ++k) {
    psi = grover_step(psi, problem);
    run.iterations.push_back({k, std::norm(psi[problem.marked()])});
  }
  return run;
}

}  // namespace adiabatic
