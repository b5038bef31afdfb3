#pragma once

// Pure-state entanglement: two-qubit concurrence, reduced-density eigenvalues
// and the entropy of entanglement (von Neumann entropy of a subsystem, in
// bits).
//
// Concurrence follows the convention C = |c0 c3 - c1 c2|, which lies in
// [0, 1/2]; the reduced eigenvalues are then mu = (1 +- sqrt(1 - 4 C^2)) / 2.
// standard_concurrence() returns 2C for comparison with the usual [0, 1]
// normalization.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "adiabatic/error.hpp"
#include "adiabatic/evolution.hpp"
#include "adiabatic/linalg.hpp"

namespace adiabatic {

namespace detail {

inline void require_two_qubits(const QState& state) {
  if (state.qubits() != 2) {
    throw Error(Errc::wrong_size,
                "two-qubit measure applied to a " + std::to_string(state.qubits()) + "-qubit state");
  }
}

/// -x log2 x with 0 log 0 = 0; tiny negative rounding residue counts as 0.
inline double entropy_term(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace detail

inline double concurrence(const QState& state) {
  detail::require_two_qubits(state);
  return std::abs(state[0] * state[3] - state[1] * state[2]);
}

inline double standard_concurrence(const QState& state) { return 2.0 * concurrence(state); }

struct ReducedEigenvalues {
  double plus = 1.0;
  double minus = 0.0;
};

inline ReducedEigenvalues reduced_eigenvalues_from_concurrence(double c) {
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * c * c));
  return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

/// Eigenvalues of either single-qubit reduced density matrix. Equal to
/// reduced_eigenvalues_from_concurrence(concurrence(state)), but evaluated
/// from rho_A directly: 1 - 4 C^2 = (a - d)^2 + 4 |b|^2 avoids the
/// cancellation near maximal entanglement.
inline ReducedEigenvalues reduced_eigenvalues(const QState& state) {
  detail::require_two_qubits(state);
  const double a = std::norm(state[0]) + std::norm(state[1]);
  const double d = std::norm(state[2]) + std::norm(state[3]);
  const cplx b = state[0] * std::conj(state[2]) + state[1] * std::conj(state[3]);
  const double root =
      std::min(1.0, std::sqrt((a - d) * (a - d) + 4.0 * std::norm(b)) / (a + d));
  return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

/// Binary entropy of the reduced spectrum, in bits.
inline double entropy_from_concurrence(double c) {
  const auto [plus, minus] = reduced_eigenvalues_from_concurrence(c);
  return detail::entropy_term(plus) + detail::entropy_term(minus);
}

/// -sum lambda log2 lambda over the reduced density matrix of `cut`.
inline double entropy_of_entanglement(const QState& state, std::span<const int> cut) {
  const DensityMatrix reduced = partial_trace(DensityMatrix::pure(state), state.qubits(), cut);
  const RealVector lambda = reduced.eigenvalues();
  double s = 0.0;
  for (Index k = 0; k < lambda.size(); ++k) s += detail::entropy_term(lambda(k));
  return s;
}

inline double entropy_of_entanglement(const QState& state, std::initializer_list<int> cut) {
  return entropy_of_entanglement(state, std::span<const int>(cut.begin(), cut.size()));
}

struct EntanglementPoint {
  double s = 0.0;
  double concurrence = 0.0;
  double entropy = 0.0;
  double mu_plus = 1.0;
  double mu_minus = 0.0;
  double fidelity_marked = 0.0;
};

/// Entanglement of every sample of a two-qubit evolution.
inline std::vector<EntanglementPoint> entanglement_trace(const EvolutionTrace& evolution) {
  std::vector<EntanglementPoint> out;
  out.reserve(evolution.samples.size());
  for (const auto& sample : evolution.samples) {
    const double c = concurrence(sample.state);
    const auto [plus, minus] = reduced_eigenvalues(sample.state);
    out.push_back({sample.s, c, detail::entropy_term(plus) + detail::entropy_term(minus), plus,
                   minus, sample.fidelity_marked});
  }
  return out;
}

}  // namespace adiabatic
