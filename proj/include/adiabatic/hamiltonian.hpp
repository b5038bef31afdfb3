#pragma once

// Adiabatic search Hamiltonians
//
//   H(s) = f(s) H0 + g(s) H1,   H0 = I - |psi0><psi0|,   H1 = I - |m><m|,
//
// their instantaneous spectra, the minimum gap, the adiabatic runtime
// estimate, the locally adiabatic schedule and the oracle action integral.
//
// Because H(s) = (f+g) I - f |psi0><psi0| - g |m><m|, every H(s) acts as the
// scalar f+g on the complement of span{|m>, |psi0>}. SubspaceModel exploits
// that to give the exact spectrum from a 2x2 problem; the dense route through
// hermitian_eig is kept as an independent check and for small registers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adiabatic/error.hpp"
#include "adiabatic/linalg.hpp"
#include "adiabatic/schedule.hpp"

namespace adiabatic {

/// Database of 2^n items with one marked basis state and a starting state
/// that must overlap it.
class SearchProblem {
 public:
  SearchProblem(QState initial, Index marked) : initial_(std::move(initial)), marked_(marked) {
    if (marked_ < 0 || marked_ >= initial_.dim()) {
      throw Error(Errc::out_of_range, "marked index " + std::to_string(marked_) +
                                          " outside [0, " + std::to_string(initial_.dim()) + ")");
    }
    if (!(overlap() > 0.0)) {
      throw Error(Errc::invalid_argument,
                  "initial state has no overlap with the marked state; search cannot succeed");
    }
  }

  /// Uniform superposition start.
  static SearchProblem uniform(int qubits, Index marked = 0) {
    return SearchProblem(QState::uniform(qubits), marked);
  }

  [[nodiscard]] int qubits() const noexcept { return initial_.qubits(); }
  [[nodiscard]] Index dim() const noexcept { return initial_.dim(); }
  [[nodiscard]] Index marked() const noexcept { return marked_; }
  [[nodiscard]] const QState& initial() const noexcept { return initial_; }
  [[nodiscard]] QState marked_state() const { return QState::basis(qubits(), marked_); }
  /// |<m|psi0>|
  [[nodiscard]] double overlap() const { return std::abs(initial_[marked_]); }

 private:
  QState initial_;
  Index marked_;
};

inline HermitianOp build_h0(const SearchProblem& problem) {
  return HermitianOp::identity(problem.dim()) - projector(problem.initial());
}

inline HermitianOp build_h1(const SearchProblem& problem) {
  Matrix m = Matrix::Identity(problem.dim(), problem.dim());
  m(problem.marked(), problem.marked()) = 0.0;
  return HermitianOp(std::move(m));
}

inline HermitianOp hamiltonian_at(const SearchProblem& problem, const Schedule& schedule,
                                  double s) {
  return schedule.f(s) * build_h0(problem) + schedule.g(s) * build_h1(problem);
}

inline HermitianOp dh_ds(const SearchProblem& problem, const Schedule& schedule, double s) {
  return schedule.df(s) * build_h0(problem) + schedule.dg(s) * build_h1(problem);
}

/// Exact reduction of f H0 + g H1 onto span{|m>, |psi0>}.
class SubspaceModel {
 public:
  explicit SubspaceModel(const SearchProblem& problem)
      : dim_(problem.dim()), marked_(problem.marked()) {
    const Vector& psi = problem.initial().amplitudes();
    const Index m = problem.marked();
    Vector rest = psi;
    rest(m) = 0.0;
    const double rest_norm = rest.norm();
    const bool two_dim = rest_norm > 1e-14 && dim_ > 1;
    basis_ = Matrix::Zero(dim_, two_dim ? 2 : 1);
    basis_(m, 0) = 1.0;
    psi_ = Vector::Zero(basis_.cols());
    psi_(0) = psi(m);
    if (two_dim) {
      basis_.col(1) = rest / rest_norm;
      psi_(1) = rest_norm;
    }
    // Renormalize the reduced start in case the 1-D branch dropped a sliver.
    psi_ /= psi_.norm();
  }

  [[nodiscard]] Index dim() const noexcept { return dim_; }
  [[nodiscard]] Index rank() const noexcept { return basis_.cols(); }
  [[nodiscard]] Index marked() const noexcept { return marked_; }
  /// Orthonormal columns spanning the active subspace; column 0 is |m>.
  [[nodiscard]] const Matrix& basis() const noexcept { return basis_; }
  /// |psi0> in subspace coordinates.
  [[nodiscard]] const Vector& initial_coords() const noexcept { return psi_; }

  /// (f+g) I - f |psi0><psi0| - g |m><m| in subspace coordinates.
  [[nodiscard]] Matrix compress(double f, double g) const {
    Matrix h = (f + g) * Matrix::Identity(rank(), rank()) - f * psi_ * psi_.adjoint();
    h(0, 0) -= g;
    return 0.5 * (h + h.adjoint());
  }

  /// Eigenvalue of every vector orthogonal to the active subspace.
  [[nodiscard]] static double bulk_level(double f, double g) noexcept { return f + g; }
  [[nodiscard]] Index bulk_multiplicity() const noexcept { return dim_ - rank(); }

  [[nodiscard]] Vector lift(const Vector& coords) const { return basis_ * coords; }
  [[nodiscard]] Vector project(const Vector& full) const { return basis_.adjoint() * full; }

 private:
  Index dim_;
  Index marked_;
  Matrix basis_;
  Vector psi_;
};

enum class SpectralMethod {
  subspace,  ///< exact 2x2 reduction, O(N) per point
  dense,     ///< full hermitian_eig of the N x N matrix
};

/// Per-s spectral record.
struct SpectralPoint {
  double s = 0.0;
  RealVector energies;  ///< ascending, length N
  double gap = 0.0;     ///< E1 - E0
  double matrix_element = 0.0;  ///< |<E1|dH/ds|E0>|
};

/// Two lowest levels of H(s) together with the adiabatic matrix element.
struct LowLevels {
  RealVector energies;
  Vector ground;  ///< gauge fixed
  Vector first_excited;
  double matrix_element = 0.0;
  double slope_e0 = 0.0;  ///< dE0/ds (Hellmann-Feynman)
  double slope_e1 = 0.0;  ///< dE1/ds
};

namespace detail {

inline constexpr double degeneracy_tolerance = 1e-10;

inline LowLevels low_levels_subspace(const SubspaceModel& model, double f, double g, double df,
                                     double dg) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(model.compress(f, g));
  const RealVector& sub = solver.eigenvalues();
  const Matrix& u = solver.eigenvectors();
  const Matrix dh = model.compress(df, dg);

  LowLevels out;
  out.energies.resize(model.dim());
  out.energies.head(model.rank()) = sub;
  out.energies.tail(model.bulk_multiplicity()).setConstant(SubspaceModel::bulk_level(f, g));
  std::sort(out.energies.data(), out.energies.data() + out.energies.size());

  out.ground = model.lift(u.col(0));
  fix_gauge(out.ground);
  out.slope_e0 = u.col(0).dot(dh * u.col(0)).real();

  if (model.rank() == 2) {
    out.first_excited = model.lift(u.col(1));
    fix_gauge(out.first_excited);
    out.matrix_element = std::abs(u.col(1).dot(dh * u.col(0)));
    out.slope_e1 = u.col(1).dot(dh * u.col(1)).real();
  } else {
    // Start equals the marked state: the excited level is the bulk, which
    // dH/ds cannot reach from the ground state.
    out.first_excited = Vector::Zero(model.dim());
    out.first_excited(model.marked() == 0 ? 1 : 0) = 1.0;
    out.matrix_element = 0.0;
    out.slope_e1 = df + dg;
  }
  return out;
}

inline LowLevels low_levels_dense(const HermitianOp& h, const HermitianOp& dh) {
  const EigenDecomposition eig = hermitian_eig(h);
  LowLevels out;
  out.energies = eig.eigenvalues;
  out.ground = eig.vector(0);
  out.slope_e0 = out.ground.dot(dh.matrix() * out.ground).real();
  if (eig.size() < 2) return out;
  out.first_excited = eig.vector(1);
  out.slope_e1 = out.first_excited.dot(dh.matrix() * out.first_excited).real();
  // A degenerate first excited level has no preferred vector; the matrix
  // element is the norm of dH|E0> projected onto the whole level, which is
  // the continuous limit of the non-degenerate value.
  const double e1 = eig.eigenvalues(1);
  const double tol = degeneracy_tolerance * std::max(1.0, std::abs(e1));
  const Vector push = dh.matrix() * out.ground;
  Vector proj = Vector::Zero(h.dim());
  for (Index k = 1; k < eig.size() && std::abs(eig.eigenvalues(k) - e1) <= tol; ++k) {
    proj += eig.vector(k) * eig.vector(k).dot(push);
  }
  out.matrix_element = proj.norm();
  return out;
}

}  // namespace detail

/// Lowest two levels of H(s) for the given schedule.
inline LowLevels low_levels(const SearchProblem& problem, const Schedule& schedule, double s,
                            SpectralMethod method = SpectralMethod::subspace) {
  if (method == SpectralMethod::dense) {
    return detail::low_levels_dense(hamiltonian_at(problem, schedule, s),
                                    dh_ds(problem, schedule, s));
  }
  const SubspaceModel model(problem);
  return detail::low_levels_subspace(model, schedule.f(s), schedule.g(s), schedule.df(s),
                                     schedule.dg(s));
}

inline SpectralPoint to_spectral_point(double s, LowLevels levels) {
  SpectralPoint p;
  p.s = s;
  p.gap = std::max(0.0, levels.energies(1) - levels.energies(0));
  p.matrix_element = levels.matrix_element;
  p.energies = std::move(levels.energies);
  return p;
}

/// One SpectralPoint per node of the uniform grid s_k = k / (grid_points - 1).
inline std::vector<SpectralPoint> spectrum_trace(const SearchProblem& problem,
                                                 const Schedule& schedule, int grid_points,
                                                 SpectralMethod method = SpectralMethod::subspace) {
  if (grid_points < 2) {
    throw Error(Errc::invalid_argument, "spectrum trace needs at least two grid points");
  }
  std::vector<SpectralPoint> out;
  out.reserve(std::size_t(grid_points));
  const SubspaceModel model(problem);
  for (int k = 0; k < grid_points; ++k) {
    const double s = double(k) / double(grid_points - 1);
    LowLevels levels =
        method == SpectralMethod::dense
            ? detail::low_levels_dense(hamiltonian_at(problem, schedule, s),
                                       dh_ds(problem, schedule, s))
            : detail::low_levels_subspace(model, schedule.f(s), schedule.g(s), schedule.df(s),
                                          schedule.dg(s));
    out.push_back(to_spectral_point(s, std::move(levels)));
  }
  return out;
}

struct GapMinimum {
  double s = 0.0;
  double gap = 0.0;
};

using ScalarFunction = std::function<double(double)>;

namespace detail {

inline constexpr double golden_tolerance = 1e-8;

/// Golden-section minimization of a unimodal function on [lo, hi].
inline double golden_minimize(const ScalarFunction& fn, double lo, double hi,
                              double tol = golden_tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

/// Bracket of grid neighbours around index k.
inline std::pair<double, double> bracket(std::span<const double> grid, std::size_t k) {
  const double lo = k == 0 ? grid[0] : grid[k - 1];
  const double hi = k + 1 == grid.size() ? grid[k] : grid[k + 1];
  return {lo, hi};
}

/// Minimizes `fn` over [lo, hi] starting from the grid value at `s0`:
/// golden section, then a bisection polish on `slope` when it changes sign.
inline std::pair<double, double> refine_minimum(const ScalarFunction& fn,
                                                const ScalarFunction& slope, double lo, double hi,
                                                double s0, double f0) {
  double best_s = s0, best_f = f0;
  if (hi > lo) {
    const double s = golden_minimize(fn, lo, hi);
    const double v = fn(s);
    if (v < best_f) {
      best_s = s;
      best_f = v;
    }
    if (slope) {
      double a = lo, b = hi;
      double sa = slope(a);
      if (sa < 0.0 && slope(b) > 0.0) {
        for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon(); ++it) {
          const double mid = 0.5 * (a + b);
          const double sm = slope(mid);
          if (sm == 0.0) {
            a = b = mid;
            break;
          }
          (sm < 0.0 ? a : b) = mid;
        }
        const double root = 0.5 * (a + b);
        const double vr = fn(root);
        if (vr <= best_f + 4 * std::numeric_limits<double>::epsilon()) {
          best_s = root;
          best_f = std::min(vr, best_f);
        }
      }
    }
  }
  return {best_s, best_f};
}

}  // namespace detail

/// Grid minimum of the gap, without refinement.
inline GapMinimum min_gap(std::span<const SpectralPoint> trace) {
  if (trace.empty()) throw Error(Errc::empty_trace, "min_gap of an empty trace");
  const auto it = std::min_element(trace.begin(), trace.end(),
                                   [](const auto& a, const auto& b) { return a.gap < b.gap; });
  return {it->s, it->gap};
}

/// Grid minimum refined by golden-section search on `gap` between the
/// neighbouring grid nodes, polished by bisection on `slope` if provided.
inline GapMinimum min_gap(std::span<const SpectralPoint> trace, const ScalarFunction& gap,
                          const ScalarFunction& slope = {}) {
  const GapMinimum coarse = min_gap(trace);
  if (!gap || trace.size() < 2) return coarse;
  std::vector<double> grid;
  grid.reserve(trace.size());
  for (const auto& p : trace) grid.push_back(p.s);
  const auto k = std::size_t(std::find_if(trace.begin(), trace.end(),
                                          [&](const auto& p) { return p.s == coarse.s; }) -
                             trace.begin());
  const auto [lo, hi] = detail::bracket(grid, k);
  const auto [s, g] = detail::refine_minimum(gap, slope, lo, hi, coarse.s, coarse.gap);
  return {s, g};
}

/// Refined minimum gap of `problem` under `schedule`, bracketed by `trace`.
inline GapMinimum min_gap(const SearchProblem& problem, const Schedule& schedule,
                          std::span<const SpectralPoint> trace) {
  const SubspaceModel model(problem);
  auto levels = [&](double s) {
    return detail::low_levels_subspace(model, schedule.f(s), schedule.g(s), schedule.df(s),
                                       schedule.dg(s));
  };
  ScalarFunction gap = [&](double s) {
    const LowLevels l = levels(s);
    return l.energies(1) - l.energies(0);
  };
  ScalarFunction slope = [&](double s) {
    const LowLevels l = levels(s);
    return l.slope_e1 - l.slope_e0;
  };
  return min_gap(trace, gap, slope);
}

/// How the adiabatic condition is evaluated.
enum class CriterionMode {
  automatic,  ///< global for the linear schedule, local otherwise
  global,     ///< max_s |<E1|dH/ds|E0>| / (eps * g_min^2)
  local,      ///< max_s |<E1|dH/ds|E0>| / (eps * gap(s)^2)
};

struct AdiabaticCriterion {
  static constexpr double hbar = 1.0;

  double epsilon = 0.1;
  int grid_points = 1024;
  CriterionMode mode = CriterionMode::automatic;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1)");
    }
    if (grid_points < 64) {
      throw Error(Errc::invalid_argument, "adiabatic criterion needs at least 64 grid points");
    }
  }

  [[nodiscard]] CriterionMode resolved(const Schedule& schedule) const noexcept {
    if (mode != CriterionMode::automatic) return mode;
    return schedule.kind() == ScheduleKind::linear ? CriterionMode::global : CriterionMode::local;
  }
};

/// Everything behind a runtime estimate.
struct RuntimeEstimate {
  double t_min = 0.0;
  GapMinimum gap_minimum;
  double s_critical = 0.0;      ///< where the bounding ratio peaks
  double matrix_element = 0.0;  ///< |<E1|dH/ds|E0>| at s_critical
  CriterionMode mode = CriterionMode::global;
};

/// Smallest T for which the adiabatic condition holds at accuracy epsilon,
/// using dH/dt = (1/T) dH/ds.
inline RuntimeEstimate adiabatic_runtime(const SearchProblem& problem, const Schedule& schedule,
                                         const AdiabaticCriterion& crit = {}) {
  crit.validate();
  const auto trace = spectrum_trace(problem, schedule, crit.grid_points);
  RuntimeEstimate out;
  out.mode = crit.resolved(schedule);
  out.gap_minimum = min_gap(problem, schedule, trace);

  const SubspaceModel model(problem);
  auto levels = [&](double s) {
    return detail::low_levels_subspace(model, schedule.f(s), schedule.g(s), schedule.df(s),
                                       schedule.dg(s));
  };
  const bool local = out.mode == CriterionMode::local;
  // Quantity to maximize over s; negated for the shared minimizer.
  ScalarFunction bound = [&](double s) {
    const LowLevels l = levels(s);
    const double gap = l.energies(1) - l.energies(0);
    if (!local) return l.matrix_element;
    if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
    return l.matrix_element / (gap * gap);
  };

  std::vector<double> grid;
  grid.reserve(trace.size());
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& p = trace[k];
    grid.push_back(p.s);
    const double v = local ? (p.gap > 0.0 ? p.matrix_element / (p.gap * p.gap)
                                          : std::numeric_limits<double>::infinity())
                           : p.matrix_element;
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  const auto [lo, hi] = detail::bracket(grid, best);
  const auto [s_peak, neg_peak] = detail::refine_minimum([&](double s) { return -bound(s); }, {},
                                                         lo, hi, grid[best], -best_value);
  const double peak = -neg_peak;
  out.s_critical = s_peak;
  out.matrix_element = levels(s_peak).matrix_element;

  const double scale = local ? peak : peak / (out.gap_minimum.gap * out.gap_minimum.gap);
  out.t_min = AdiabaticCriterion::hbar * scale / crit.epsilon;
  return out;
}

inline double adiabatic_t_min(const SearchProblem& problem, const Schedule& schedule,
                              const AdiabaticCriterion& crit = {}) {
  return adiabatic_runtime(problem, schedule, crit).t_min;
}

/// Schedule that applies the adiabatic condition locally along the linear
/// path: dt/ds = |<E1|dH/ds|E0>| / (eps * gap(s)^2), integrated and inverted
/// to a table s(t/T). The integrated T is recorded as the schedule duration.
inline Schedule local_schedule(const SearchProblem& problem, const AdiabaticCriterion& crit = {},
                               std::optional<int> grid_points = std::nullopt) {
  crit.validate();
  const int nodes = grid_points.value_or(crit.grid_points);
  if (nodes < 2) throw Error(Errc::invalid_argument, "local schedule needs at least two nodes");
  const auto trace = spectrum_trace(problem, Schedule::linear(), nodes);

  std::vector<double> rate(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& p = trace[k];
    if (!(p.gap >= 1e-12)) {
      throw Error(Errc::gap_too_small,
                  "gap " + std::to_string(p.gap) + " at s = " + std::to_string(p.s));
    }
    rate[k] = p.matrix_element / (crit.epsilon * p.gap * p.gap);
  }

  std::vector<double> elapsed(trace.size(), 0.0);
  for (std::size_t k = 1; k < trace.size(); ++k) {
    elapsed[k] = elapsed[k - 1] + 0.5 * (rate[k] + rate[k - 1]) * (trace[k].s - trace[k - 1].s);
  }
  const double total = elapsed.back();
  if (!(total > 0.0)) {
    // Nothing constrains the sweep; any monotone schedule is adiabatic.
    return Schedule::tabulated({0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0}, ScheduleKind::local, 0.0);
  }

  std::vector<double> tau, s, slope;
  tau.reserve(trace.size());
  s.reserve(trace.size());
  slope.reserve(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = k + 1 == trace.size() ? 1.0 : elapsed[k] / total;
    if (!tau.empty() && !(t > tau.back())) continue;
    tau.push_back(t);
    s.push_back(trace[k].s);
    slope.push_back(rate[k] > 0.0 ? total / rate[k] : std::numeric_limits<double>::infinity());
  }
  tau.front() = 0.0;
  return Schedule::tabulated(std::move(tau), std::move(s), std::move(slope), ScheduleKind::local,
                             total);
}

inline constexpr int action_intervals = 1024;

/// Composite Simpson rule for integral_0^T g(t/T) dt with hbar = 1.
template <typename G>
  requires std::invocable<const G&, double>
double action_integral(const G& g, double T, int intervals = action_intervals) {
  if (!(T > 0.0)) throw Error(Errc::invalid_argument, "action integral needs T > 0");
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const double h = 1.0 / intervals;
  double acc = g(0.0) + g(1.0);
  for (int k = 1; k < intervals; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * g(k * h);
  return T * acc * h / 3.0 / AdiabaticCriterion::hbar;
}

inline double action_integral(const Schedule& schedule, double T,
                              int intervals = action_intervals) {
  return action_integral([&](double s) { return schedule.g(s); }, T, intervals);
}

}  // namespace adiabatic
