#pragma once

// Dense complex linear algebra for small qubit registers: state vectors,
// Hermitian operators, eigendecomposition, tensor products and partial traces.
//
// Basis ordering is big-endian: basis index b encodes |b_{n-1} ... b_0>, and
// qubit q (q = 0 is "A", the leftmost factor) lives at bit position n-1-q.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "adiabatic/error.hpp"

namespace adiabatic {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr int max_qubits = 12;

/// Hilbert-space dimension 2^n for a register of `qubits` qubits.
inline Index dimension_for(int qubits) {
  if (qubits < 1 || qubits > max_qubits) {
    throw Error(Errc::out_of_range,
                "qubit count must lie in [1, " + std::to_string(max_qubits) + "], got " +
                    std::to_string(qubits));
  }
  return Index{1} << qubits;
}

/// Normalized pure state of `qubits` qubits in the computational basis.
class QState {
 public:
  /// Amplitudes must already be normalized to within `norm_tolerance`.
  static constexpr double norm_tolerance = 1e-9;

  QState(int qubits, Vector amplitudes) : qubits_(qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != dimension_for(qubits_)) {
      throw Error(Errc::wrong_size, "expected " + std::to_string(dimension_for(qubits_)) +
                                        " amplitudes, got " + std::to_string(amps_.size()));
    }
    const double drift = std::abs(amps_.squaredNorm() - 1.0);
    if (!(drift <= norm_tolerance)) {
      throw Error(Errc::invalid_argument,
                  "state is not normalized (|norm^2 - 1| = " + std::to_string(drift) + ")");
    }
  }

  /// Rescales arbitrary non-zero amplitudes onto the unit sphere.
  static QState normalized(int qubits, Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(Errc::invalid_argument, "cannot normalize a zero or non-finite vector");
    }
    amplitudes /= norm;
    return QState(qubits, std::move(amplitudes));
  }

  static QState basis(int qubits, Index index) {
    const Index dim = dimension_for(qubits);
    if (index < 0 || index >= dim) {
      throw Error(Errc::out_of_range, "basis index " + std::to_string(index) + " outside [0, " +
                                          std::to_string(dim) + ")");
    }
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return QState(qubits, std::move(v));
  }

  /// Equal-weight superposition of every basis state.
  static QState uniform(int qubits) {
    const Index dim = dimension_for(qubits);
    return QState(qubits, Vector::Constant(dim, cplx(1.0 / std::sqrt(double(dim)), 0.0)));
  }

  /// (|00> + |11>)/sqrt(2).
  static QState bell() {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return QState(2, std::move(v));
  }

  [[nodiscard]] int qubits() const noexcept { return qubits_; }
  [[nodiscard]] Index dim() const noexcept { return amps_.size(); }
  [[nodiscard]] const Vector& amplitudes() const noexcept { return amps_; }
  [[nodiscard]] cplx operator[](Index i) const { return amps_(i); }
  [[nodiscard]] double norm() const { return amps_.norm(); }

 private:
  int qubits_;
  Vector amps_;
};

/// <a|b>
inline cplx inner(const QState& a, const QState& b) {
  if (a.dim() != b.dim()) {
    throw Error(Errc::dim_mismatch, "inner product of states with different dimensions");
  }
  return a.amplitudes().dot(b.amplitudes());
}

inline QState tensor_product(const QState& a, const QState& b) {
  const Index q = b.dim();
  Vector out(a.dim() * q);
  for (Index i = 0; i < a.dim(); ++i) {
    out.segment(i * q, q) = a[i] * b.amplitudes();
  }
  return QState(a.qubits() + b.qubits(), std::move(out));
}

namespace detail {

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

inline double hermitian_tolerance(const Matrix& m, double tol) {
  return tol * std::max(1.0, max_abs(m));
}

}  // namespace detail

/// Dense Hermitian matrix; Hermiticity is checked at construction.
class HermitianOp {
 public:
  static constexpr double tolerance = 1e-12;

  explicit HermitianOp(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
      throw Error(Errc::wrong_size, "operator matrix must be square");
    }
    const double defect = detail::hermiticity_defect(m_);
    if (!(defect <= detail::hermitian_tolerance(m_, tolerance))) {
      throw Error(Errc::non_hermitian, "max |H - H^dagger| = " + std::to_string(defect));
    }
  }

  static HermitianOp identity(Index dim) { return HermitianOp(Matrix::Identity(dim, dim)); }

  [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] cplx operator()(Index i, Index j) const { return m_(i, j); }
  [[nodiscard]] double frobenius_norm() const { return m_.norm(); }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

  friend HermitianOp operator+(const HermitianOp& a, const HermitianOp& b) {
    check_same_dim(a, b);
    return HermitianOp(trusted{}, a.m_ + b.m_);
  }
  friend HermitianOp operator-(const HermitianOp& a, const HermitianOp& b) {
    check_same_dim(a, b);
    return HermitianOp(trusted{}, a.m_ - b.m_);
  }
  friend HermitianOp operator*(double k, const HermitianOp& a) {
    return HermitianOp(trusted{}, k * a.m_);
  }

 private:
  struct trusted {};
  HermitianOp(trusted, Matrix m) : m_(std::move(m)) {}

  static void check_same_dim(const HermitianOp& a, const HermitianOp& b) {
    if (a.dim() != b.dim()) throw Error(Errc::dim_mismatch, "operator dimensions differ");
  }

  Matrix m_;
};

/// |psi><psi|
inline HermitianOp projector(const QState& psi) {
  const Vector& v = psi.amplitudes();
  Matrix p = v * v.adjoint();
  // Exact symmetrization; the outer product is Hermitian only up to rounding.
  p = 0.5 * (p + p.adjoint()).eval();
  return HermitianOp(std::move(p));
}

/// <psi|H|psi>; the imaginary rounding residue is dropped.
inline double expectation(const HermitianOp& h, const QState& psi) {
  if (h.dim() != psi.dim()) {
    throw Error(Errc::dim_mismatch, "operator dimension " + std::to_string(h.dim()) +
                                        " vs state dimension " + std::to_string(psi.dim()));
  }
  return psi.amplitudes().dot(h.matrix() * psi.amplitudes()).real();
}

/// Ascending eigenvalues with orthonormal eigenvector columns.
///
/// Gauge: the first component of largest magnitude in every eigenvector is
/// real and non-negative. Degenerate eigenvalues appear as repeated entries;
/// only the span of a degenerate block is meaningful.
struct EigenDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  [[nodiscard]] Index size() const noexcept { return eigenvalues.size(); }
  [[nodiscard]] Vector vector(Index k) const { return eigenvectors.col(k); }
};

/// Rotates `v` so its first largest-magnitude entry is real and non-negative.
inline void fix_gauge(Eigen::Ref<Vector> v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  // Ties are resolved towards the lowest index, with a relative slack so the
  // choice does not flicker on rounding noise.
  Index pick = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-12)) {
      pick = i;
      break;
    }
  }
  v *= std::conj(v(pick)) / std::abs(v(pick));
}

inline EigenDecomposition hermitian_eig(const HermitianOp& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::invalid_argument, "Hermitian eigensolver failed to converge");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Index k = 0; k < out.eigenvectors.cols(); ++k) fix_gauge(out.eigenvectors.col(k));
  return out;
}

/// Checked entry point for raw matrices.
inline EigenDecomposition hermitian_eig(const Matrix& m) { return hermitian_eig(HermitianOp(m)); }

/// Eigenvalues only, ascending. Several times cheaper than the full
/// decomposition for large dimensions.
inline RealVector hermitian_eigenvalues(const HermitianOp& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::invalid_argument, "Hermitian eigensolver failed to converge");
  }
  return solver.eigenvalues();
}

/// Unit-trace Hermitian matrix.
class DensityMatrix {
 public:
  static constexpr double tolerance = 1e-12;

  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw Error(Errc::wrong_size, "density matrix must be square and non-empty");
    }
    if (!(detail::hermiticity_defect(m_) <= detail::hermitian_tolerance(m_, tolerance))) {
      throw Error(Errc::non_hermitian, "density matrix is not Hermitian");
    }
    const cplx tr = m_.trace();
    if (!(std::abs(tr - cplx(1.0)) <= tolerance * double(m_.rows()))) {
      throw Error(Errc::invalid_argument, "density matrix trace is not 1");
    }
  }

  /// |psi><psi|, rescaled to unit trace.
  static DensityMatrix pure(const QState& psi) {
    const Vector& v = psi.amplitudes();
    Matrix rho = v * v.adjoint() / v.squaredNorm();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
  }

  [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] cplx operator()(Index i, Index j) const { return m_(i, j); }

  [[nodiscard]] RealVector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

  /// Positive semidefinite within `tol`.
  [[nodiscard]] bool is_positive(double tol = tolerance) const {
    return m_.rows() == 0 || eigenvalues().minCoeff() >= -tol;
  }

 private:
  Matrix m_;
};

/// Traces out every qubit not listed in `keep`. The kept qubits retain their
/// relative order in the reduced basis.
inline DensityMatrix partial_trace(const DensityMatrix& rho, int qubits, std::span<const int> keep) {
  const Index dim = dimension_for(qubits);
  if (rho.dim() != dim) {
    throw Error(Errc::dim_mismatch, "density matrix dimension does not match qubit count");
  }
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (kept.empty() || std::ssize(kept) >= qubits ||
      std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.front() < 0 ||
      kept.back() >= qubits) {
    throw Error(Errc::bad_subset, "kept qubits must form a nonempty proper subset of [0, " +
                                      std::to_string(qubits) + ")");
  }
  std::vector<int> traced;
  for (int q = 0; q < qubits; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }

  // Scatter the bits of a sub-register index into full-register positions.
  auto scatter = [qubits](Index sub, const std::vector<int>& positions) {
    Index full = 0;
    const auto width = std::ssize(positions);
    for (std::ptrdiff_t k = 0; k < width; ++k) {
      const Index bit = (sub >> (width - 1 - k)) & 1;
      full |= bit << (qubits - 1 - positions[std::size_t(k)]);
    }
    return full;
  };

  const Index keep_dim = Index{1} << kept.size();
  const Index trace_dim = Index{1} << traced.size();
  std::vector<Index> keep_offsets(static_cast<std::size_t>(keep_dim));
  std::vector<Index> trace_offsets(static_cast<std::size_t>(trace_dim));
  for (Index i = 0; i < keep_dim; ++i) keep_offsets[std::size_t(i)] = scatter(i, kept);
  for (Index t = 0; t < trace_dim; ++t) trace_offsets[std::size_t(t)] = scatter(t, traced);

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (Index i = 0; i < keep_dim; ++i) {
    for (Index j = 0; j < keep_dim; ++j) {
      cplx acc = 0.0;
      for (Index t : trace_offsets) {
        acc += rho(keep_offsets[std::size_t(i)] | t, keep_offsets[std::size_t(j)] | t);
      }
      out(i, j) = acc;
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, int qubits,
                                   std::initializer_list<int> keep) {
  return partial_trace(rho, qubits, std::span<const int>(keep.begin(), keep.size()));
}

}  // namespace adiabatic
