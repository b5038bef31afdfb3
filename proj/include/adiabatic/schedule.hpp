#pragma once

// Interpolation schedules H(tau) = f(tau) H0 + g(tau) H1 on normalized time
// tau = t/T in [0, 1].
//
// All schedules here share the one-parameter form f = 1 - s(tau),
// g = s(tau), where s is the position along the straight interpolation path.
// The linear schedule uses s = tau; local and tabulated schedules carry a
// monotone table of (tau, s) samples joined by cubic Hermite segments.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adiabatic/error.hpp"

namespace adiabatic {

enum class ScheduleKind { linear, local, tabulated };

inline constexpr std::string_view to_string(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::linear: return "linear";
    case ScheduleKind::local: return "local";
    case ScheduleKind::tabulated: return "tabulated";
  }
  return "unknown";
}

class Schedule {
 public:
  /// Step for the central-difference derivatives of tabulated kinds.
  static constexpr double derivative_step = 1e-6;
  static constexpr double boundary_tolerance = 1e-12;

  static Schedule linear() { return Schedule(); }

  /// Monotone table s(tau). `slopes`, if given, are ds/dtau at the nodes;
  /// otherwise monotone (Fritsch-Carlson) slopes are derived from the data.
  /// `duration` records the natural runtime of a constructed schedule.
  static Schedule tabulated(std::vector<double> tau, std::vector<double> s,
                            std::vector<double> slopes = {},
                            ScheduleKind kind = ScheduleKind::tabulated,
                            std::optional<double> duration = std::nullopt) {
    if (kind == ScheduleKind::linear) {
      throw Error(Errc::invalid_argument, "tabulated schedule cannot have the linear kind");
    }
    Schedule out;
    out.kind_ = kind;
    out.duration_ = duration;
    out.tau_ = std::move(tau);
    out.s_ = std::move(s);
    out.slope_ = std::move(slopes);
    out.check_table();
    out.prepare_slopes();
    out.validate();
    return out;
  }

  [[nodiscard]] ScheduleKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::optional<double> duration() const noexcept { return duration_; }
  [[nodiscard]] const std::vector<double>& tau_nodes() const noexcept { return tau_; }
  [[nodiscard]] const std::vector<double>& s_nodes() const noexcept { return s_; }

  /// Position along the interpolation path at normalized time tau.
  [[nodiscard]] double progress(double tau) const {
    check_range(tau);
    if (kind_ == ScheduleKind::linear) return tau;
    return interpolate(tau);
  }

  /// d(progress)/d(tau).
  [[nodiscard]] double progress_rate(double tau) const {
    check_range(tau);
    if (kind_ == ScheduleKind::linear) return 1.0;
    const double lo = std::max(0.0, tau - derivative_step);
    const double hi = std::min(1.0, tau + derivative_step);
    return (interpolate(hi) - interpolate(lo)) / (hi - lo);
  }

  [[nodiscard]] double f(double tau) const { return 1.0 - progress(tau); }
  [[nodiscard]] double g(double tau) const { return progress(tau); }
  [[nodiscard]] double df(double tau) const { return -progress_rate(tau); }
  [[nodiscard]] double dg(double tau) const { return progress_rate(tau); }

  /// Boundary values and monotonicity on a 1e-3 grid; throws on violation.
  void validate() const {
    if (std::abs(f(0.0) - 1.0) > boundary_tolerance || std::abs(f(1.0)) > boundary_tolerance ||
        std::abs(g(0.0)) > boundary_tolerance || std::abs(g(1.0) - 1.0) > boundary_tolerance) {
      throw Error(Errc::invalid_argument, "schedule violates f(0)=1, f(1)=0, g(0)=0, g(1)=1");
    }
    double prev_f = f(0.0), prev_g = g(0.0);
    for (int k = 1; k <= 1000; ++k) {
      const double tau = k / 1000.0;
      const double fk = f(tau), gk = g(tau);
      if (fk > prev_f + boundary_tolerance || gk < prev_g - boundary_tolerance) {
        throw Error(Errc::invalid_argument,
                    "schedule is not monotone near tau = " + std::to_string(tau));
      }
      prev_f = fk;
      prev_g = gk;
    }
  }

 private:
  Schedule() = default;

  static void check_range(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
      throw Error(Errc::out_of_range, "normalized time " + std::to_string(tau) + " outside [0, 1]");
    }
  }

  void check_table() const {
    if (tau_.size() < 2 || tau_.size() != s_.size()) {
      throw Error(Errc::wrong_size, "schedule table needs at least two matching (tau, s) nodes");
    }
    if (!slope_.empty() && slope_.size() != tau_.size()) {
      throw Error(Errc::wrong_size, "schedule slope table does not match node count");
    }
    if (std::abs(tau_.front()) > boundary_tolerance ||
        std::abs(tau_.back() - 1.0) > boundary_tolerance) {
      throw Error(Errc::invalid_argument, "schedule table must span tau in [0, 1]");
    }
    for (std::size_t k = 1; k < tau_.size(); ++k) {
      if (!(tau_[k] > tau_[k - 1])) {
        throw Error(Errc::invalid_argument, "schedule tau nodes must be strictly increasing");
      }
      if (s_[k] < s_[k - 1]) {
        throw Error(Errc::invalid_argument, "schedule s nodes must be non-decreasing");
      }
    }
  }

  // Fills in missing slopes and limits the rest so every Hermite segment
  // stays monotone.
  void prepare_slopes() {
    const std::size_t n = tau_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      secant[k] = (s_[k + 1] - s_[k]) / (tau_[k + 1] - tau_[k]);
    }
    if (slope_.empty()) {
      slope_.assign(n, 0.0);
      slope_.front() = secant.front();
      slope_.back() = secant.back();
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const double a = secant[k - 1], b = secant[k];
        if (a > 0.0 && b > 0.0) {
          const double h0 = tau_[k] - tau_[k - 1], h1 = tau_[k + 1] - tau_[k];
          const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
          slope_[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      double& d = slope_[k];
      if (std::isnan(d) || d < 0.0) d = 0.0;
      if (k > 0) d = std::min(d, 3.0 * secant[k - 1]);
      if (k + 1 < n) d = std::min(d, 3.0 * secant[k]);
    }
  }

  [[nodiscard]] double interpolate(double tau) const {
    if (tau <= tau_.front()) return s_.front();
    if (tau >= tau_.back()) return s_.back();
    const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
    const auto k = std::size_t(it - tau_.begin()) - 1;
    const double h = tau_[k + 1] - tau_[k];
    const double t = (tau - tau_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * s_[k] + h10 * h * slope_[k] + h01 * s_[k + 1] + h11 * h * slope_[k + 1];
  }

  ScheduleKind kind_ = ScheduleKind::linear;
  std::optional<double> duration_;
  std::vector<double> tau_, s_, slope_;
};

}  // namespace adiabatic
