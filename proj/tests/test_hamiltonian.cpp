#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "adiabatic/hamiltonian.hpp"
#include "oracles.hpp"

using namespace adiabatic;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

SearchProblem random_problem(std::mt19937_64& rng, int n, Index marked) {
  return SearchProblem(QState(n, oracle::random_state(rng, 1 << n)), marked);
}

}  // namespace

TEST(SearchProblemTest, RejectsZeroOverlapAndBadMarked) {
  EXPECT_THROW(SearchProblem(QState::basis(2, 1), 0), Error);
  EXPECT_THROW(SearchProblem::uniform(2, 4), Error);
  EXPECT_NO_THROW(SearchProblem(QState::bell(), 3));
  EXPECT_NEAR(SearchProblem::uniform(4).overlap(), 0.25, 1e-15);
}

TEST(BuildH0Test, UniformTwoQubits) {
  const HermitianOp h0 = build_h0(SearchProblem::uniform(2));
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      EXPECT_NEAR(std::abs(h0(i, j) - cplx(i == j ? 0.75 : -0.25)), 0.0, 1e-15);
}

TEST(BuildH0Test, BasisStartIsDiagonal) {
  const HermitianOp h0 = build_h0(SearchProblem(QState::basis(2, 0), 0));
  Matrix expected = Matrix::Identity(4, 4);
  expected(0, 0) = 0.0;
  EXPECT_EQ(max_abs(h0.matrix() - expected), 0.0);
}

TEST(BuildH0Test, SpectrumIsZeroThenOnes) {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 5; ++n) {
    const auto problem = random_problem(rng, n, 0);
    const RealVector ev = hermitian_eigenvalues(build_h0(problem));
    EXPECT_NEAR(ev(0), 0.0, 1e-12);
    for (Index k = 1; k < ev.size(); ++k) EXPECT_NEAR(ev(k), 1.0, 1e-12);
    EXPECT_NEAR(expectation(build_h0(problem), problem.initial()), 0.0, 1e-12);
  }
}

TEST(BuildH1Test, Definition) {
  const RealVector d0 = build_h1(SearchProblem::uniform(2, 0)).matrix().diagonal().real();
  const RealVector d3 = build_h1(SearchProblem::uniform(2, 3)).matrix().diagonal().real();
  EXPECT_EQ(d0, (RealVector(4) << 0, 1, 1, 1).finished());
  EXPECT_EQ(d3, (RealVector(4) << 1, 1, 1, 0).finished());
  for (int n = 1; n <= 6; ++n) {
    const auto problem = SearchProblem::uniform(n, 1);
    EXPECT_NEAR(expectation(build_h1(problem), problem.initial()), 1.0 - 1.0 / (1 << n), 1e-14);
  }
}

TEST(HamiltonianAtTest, EndpointsAndMidpoint) {
  const auto problem = SearchProblem::uniform(2);
  const auto lin = Schedule::linear();
  EXPECT_EQ(max_abs(hamiltonian_at(problem, lin, 0.0).matrix() - build_h0(problem).matrix()), 0.0);
  EXPECT_EQ(max_abs(hamiltonian_at(problem, lin, 1.0).matrix() - build_h1(problem).matrix()), 0.0);
  const RealVector ev = hermitian_eigenvalues(hamiltonian_at(problem, lin, 0.5));
  EXPECT_NEAR(ev(0), 0.25, 1e-14);
  EXPECT_NEAR(ev(1), 0.75, 1e-14);
  EXPECT_NEAR(ev(2), 1.0, 1e-14);
  EXPECT_NEAR(ev(3), 1.0, 1e-14);
}

TEST(HamiltonianAtTest, OutOfRange) {
  const auto problem = SearchProblem::uniform(2);
  try {
    hamiltonian_at(problem, Schedule::linear(), 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::out_of_range);
  }
  EXPECT_THROW(hamiltonian_at(problem, Schedule::linear(), -1e-9), Error);
}

TEST(DhDsTest, LinearIsDifferenceOfEndpoints) {
  const auto problem = SearchProblem::uniform(2);
  const Matrix diff = build_h1(problem).matrix() - build_h0(problem).matrix();
  for (double s : {0.0, 0.3, 1.0}) {
    const HermitianOp d = dh_ds(problem, Schedule::linear(), s);
    EXPECT_EQ(max_abs(d.matrix() - diff), 0.0);
    EXPECT_NEAR(d.trace(), 0.0, 1e-14);
  }
}

TEST(DhDsTest, TabulatedUsesCentralDifference) {
  const auto problem = SearchProblem::uniform(2);
  const Schedule sq = Schedule::tabulated({0.0, 0.25, 0.5, 0.75, 1.0},
                                          {0.0, 0.0625, 0.25, 0.5625, 1.0});
  const double s = 0.5, h = Schedule::derivative_step;
  const double rate = (sq.progress(s + h) - sq.progress(s - h)) / (2 * h);
  const Matrix expected =
      -rate * build_h0(problem).matrix() + rate * build_h1(problem).matrix();
  EXPECT_LT(max_abs(dh_ds(problem, sq, s).matrix() - expected), 1e-12);
}

TEST(ScheduleTest, LinearAndTabulatedInvariants) {
  const auto lin = Schedule::linear();
  EXPECT_EQ(lin.f(0.0), 1.0);
  EXPECT_EQ(lin.g(1.0), 1.0);
  EXPECT_NO_THROW(lin.validate());
  EXPECT_THROW(Schedule::tabulated({0.0, 0.5, 1.0}, {0.0, 0.7, 0.6}), Error);
  EXPECT_THROW(Schedule::tabulated({0.0, 0.5, 1.0}, {0.1, 0.5, 1.0}), Error);
  EXPECT_THROW(Schedule::tabulated({0.0, 0.5, 0.5, 1.0}, {0.0, 0.2, 0.3, 1.0}), Error);
  // Monotone data with an aggressive slope hint must still interpolate monotonically.
  const auto s = Schedule::tabulated({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, {100.0, 0.0, 100.0});
  EXPECT_NO_THROW(s.validate());
}

TEST(SubspaceModelTest, MatchesDenseForRandomStarts) {
  std::mt19937_64 rng(23);
  for (int n = 1; n <= 5; ++n) {
    const auto problem = random_problem(rng, n, Index(rng() % (1u << n)));
    for (const auto& schedule : {Schedule::linear(),
                                 Schedule::tabulated({0.0, 0.4, 1.0}, {0.0, 0.7, 1.0})}) {
      for (double s : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0}) {
        const LowLevels a = low_levels(problem, schedule, s, SpectralMethod::subspace);
        const LowLevels b = low_levels(problem, schedule, s, SpectralMethod::dense);
        EXPECT_LT((a.energies - b.energies).cwiseAbs().maxCoeff(), 1e-12) << n << " " << s;
        EXPECT_NEAR(a.matrix_element, b.matrix_element, 1e-9) << n << " " << s;
        EXPECT_NEAR(std::abs(a.ground.dot(b.ground)), 1.0, 1e-10);
      }
    }
  }
}

TEST(SpectrumTraceTest, EndpointGapsAreOne) {
  for (int n = 1; n <= 10; ++n) {
    const auto trace = spectrum_trace(SearchProblem::uniform(n), Schedule::linear(), 3);
    ASSERT_EQ(trace.size(), 3u);
    EXPECT_NEAR(trace.front().gap, 1.0, 1e-12);
    EXPECT_NEAR(trace.back().gap, 1.0, 1e-12);
    EXPECT_EQ(trace.front().energies.size(), Index{1} << n);
  }
}

TEST(SpectrumTraceTest, MidpointGap) {
  for (int n = 2; n <= 10; ++n) {
    const auto trace = spectrum_trace(SearchProblem::uniform(n), Schedule::linear(), 5);
    EXPECT_EQ(trace[2].s, 0.5);
    EXPECT_NEAR(trace[2].gap, 1.0 / std::sqrt(double(1 << n)), 1e-12);
  }
  const auto dense = spectrum_trace(SearchProblem::uniform(2), Schedule::linear(), 5,
                                    SpectralMethod::dense);
  EXPECT_NEAR(dense[2].gap, 0.5, 1e-12);
  EXPECT_THROW(spectrum_trace(SearchProblem::uniform(2), Schedule::linear(), 1), Error);
}

TEST(SpectrumTraceTest, TwoQubitGroundEnergyClosedForm) {
  const auto trace = spectrum_trace(SearchProblem::uniform(2), Schedule::linear(), 1001);
  for (const auto& p : trace) EXPECT_NEAR(p.energies(0), oracle::two_qubit_e0(p.s), 1e-12);
}

TEST(SpectrumTraceTest, DenseMatchesBlockOracle) {
  for (int n = 2; n <= 6; ++n) {
    const double N = double(1 << n);
    const auto trace = spectrum_trace(SearchProblem::uniform(n), Schedule::linear(), 33,
                                      SpectralMethod::dense);
    for (const auto& p : trace) {
      const auto [e0, e1] = oracle::uniform_block_levels(N, 1.0 - p.s, p.s);
      EXPECT_NEAR(p.energies(0), e0, 1e-10);
      EXPECT_NEAR(p.energies(1), e1, 1e-10);
      EXPECT_NEAR(p.gap, oracle::uniform_linear_gap(N, p.s), 1e-10);
    }
  }
}

TEST(SpectrumTraceTest, GapIsSymmetricForLinearUniform) {
  for (int n : {2, 5, 9}) {
    const auto trace = spectrum_trace(SearchProblem::uniform(n), Schedule::linear(), 257);
    for (std::size_t k = 0; k < trace.size(); ++k) {
      EXPECT_NEAR(trace[k].gap, trace[trace.size() - 1 - k].gap, 1e-10);
    }
  }
}

TEST(SpectrumTraceTest, SpectrumDependsOnlyOnMarkedOverlap) {
  // Two-qubit starts with equal |c0| share the uniform start's spectrum.
  Vector amps(4);
  amps << 0.5, std::sqrt(0.75), 0.0, 0.0;
  const SearchProblem other(QState(2, amps), 0);
  const auto a = spectrum_trace(other, Schedule::linear(), 65);
  const auto b = spectrum_trace(SearchProblem::uniform(2), Schedule::linear(), 65);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_LT((a[k].energies - b[k].energies).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(a[k].matrix_element, b[k].matrix_element, 1e-12);
  }
}

TEST(MinGapTest, TwoQubits) {
  const auto problem = SearchProblem::uniform(2);
  const auto trace = spectrum_trace(problem, Schedule::linear(), 1024);
  const GapMinimum m = min_gap(problem, Schedule::linear(), trace);
  EXPECT_NEAR(m.s, 0.5, 1e-10);
  EXPECT_NEAR(m.gap, 0.5, 1e-12);
}

TEST(MinGapTest, TenQubits) {
  const auto problem = SearchProblem::uniform(10);
  const auto trace = spectrum_trace(problem, Schedule::linear(), 1024);
  const GapMinimum m = min_gap(problem, Schedule::linear(), trace);
  EXPECT_NEAR(m.s, 0.5, 1e-8);
  EXPECT_NEAR(m.gap, 1.0 / 32.0, 1e-12);
}

TEST(MinGapTest, FrozenSpectrumAndEmptyTrace) {
  std::vector<SpectralPoint> frozen(11);
  for (int k = 0; k < 11; ++k) {
    frozen[std::size_t(k)].s = k / 10.0;
    frozen[std::size_t(k)].gap = 1.0;
  }
  const GapMinimum m = min_gap(frozen, [](double) { return 1.0; });
  EXPECT_EQ(m.gap, 1.0);
  try {
    min_gap(std::span<const SpectralPoint>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_trace);
  }
}

TEST(AdiabaticTMinTest, EpsilonScaling) {
  const auto problem = SearchProblem::uniform(4);
  for (const auto& schedule : {Schedule::linear(), local_schedule(problem)}) {
    const double t1 = adiabatic_t_min(problem, schedule, {0.1});
    const double t2 = adiabatic_t_min(problem, schedule, {0.05});
    EXPECT_NEAR(t2 / t1, 2.0, 1e-12);
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.5, 0.9}) {
      const double t = adiabatic_t_min(problem, schedule, {eps});
      EXPECT_LE(t, previous);
      previous = t;
    }
  }
}

TEST(AdiabaticTMinTest, LinearScalesWithN) {
  std::vector<double> ratio;
  for (int n = 2; n <= 10; ++n) {
    const double N = double(1 << n);
    ratio.push_back(adiabatic_t_min(SearchProblem::uniform(n), Schedule::linear()) / N);
  }
  const double mean = std::accumulate(ratio.begin(), ratio.end(), 0.0) / double(ratio.size());
  for (double r : ratio) EXPECT_NEAR(r / mean, 1.0, 0.15);
}

TEST(AdiabaticTMinTest, LocalScalesWithSqrtN) {
  std::vector<double> ratio;
  for (int n = 2; n <= 10; ++n) {
    const auto problem = SearchProblem::uniform(n);
    const double N = double(1 << n);
    ratio.push_back(adiabatic_t_min(problem, local_schedule(problem)) / std::sqrt(N));
  }
  const double mean = std::accumulate(ratio.begin(), ratio.end(), 0.0) / double(ratio.size());
  for (double r : ratio) EXPECT_NEAR(r / mean, 1.0, 0.15);
}

TEST(AdiabaticTMinTest, GridDoublingConverges) {
  for (int n : {2, 6, 10}) {
    const auto problem = SearchProblem::uniform(n);
    const double a = adiabatic_t_min(problem, Schedule::linear(), {0.1, 1024});
    const double b = adiabatic_t_min(problem, Schedule::linear(), {0.1, 2048});
    EXPECT_NEAR(a / b, 1.0, 0.01);
    const double la = adiabatic_t_min(problem, local_schedule(problem, {0.1, 1024}), {0.1, 1024});
    const double lb = adiabatic_t_min(problem, local_schedule(problem, {0.1, 2048}), {0.1, 2048});
    EXPECT_NEAR(la / lb, 1.0, 0.01);
  }
}

TEST(AdiabaticTMinTest, TwoQubitLinearValue) {
  // max |<E1|dH/ds|E0>| = sqrt(3)/2 at s = 1/2, g_min = 1/2.
  const double t = adiabatic_t_min(SearchProblem::uniform(2), Schedule::linear(), {0.1});
  EXPECT_NEAR(t, std::sqrt(3.0) / 2.0 / (0.1 * 0.25), 1e-9);
}

TEST(AdiabaticTMinTest, RejectsBadCriterion) {
  const auto problem = SearchProblem::uniform(2);
  EXPECT_THROW(adiabatic_t_min(problem, Schedule::linear(), {0.0}), Error);
  EXPECT_THROW(adiabatic_t_min(problem, Schedule::linear(), {1.0}), Error);
  EXPECT_THROW(adiabatic_t_min(problem, Schedule::linear(), {0.1, 32}), Error);
}

TEST(LocalScheduleTest, BoundariesAndInvariants) {
  for (int n : {2, 5, 10}) {
    const Schedule s = local_schedule(SearchProblem::uniform(n));
    EXPECT_EQ(s.kind(), ScheduleKind::local);
    EXPECT_EQ(s.progress(0.0), 0.0);
    EXPECT_EQ(s.progress(1.0), 1.0);
    EXPECT_NO_THROW(s.validate());
    ASSERT_TRUE(s.duration().has_value());
  }
}

TEST(LocalScheduleTest, SlowestAtGapMinimum) {
  const Schedule sched = local_schedule(SearchProblem::uniform(6), {0.1, 1025});
  double slowest = std::numeric_limits<double>::infinity(), where = -1.0;
  for (int k = 1; k < 1000; ++k) {
    const double tau = k / 1000.0;
    const double rate = sched.progress_rate(tau);
    if (rate < slowest) {
      slowest = rate;
      where = sched.progress(tau);
    }
  }
  EXPECT_NEAR(where, 0.5, 0.01);
}

TEST(LocalScheduleTest, DurationMatchesRuntimeEstimate) {
  for (int n = 2; n <= 10; ++n) {
    const auto problem = SearchProblem::uniform(n);
    const Schedule sched = local_schedule(problem);
    const double t = adiabatic_t_min(problem, sched);
    EXPECT_NEAR(t / *sched.duration(), 1.0, 0.10) << "n = " << n;
  }
}

TEST(LocalScheduleTest, GapTooSmall) {
  Vector amps = Vector::Zero(4);
  amps(0) = 1e-13;
  amps(1) = std::sqrt(1.0 - 1e-26);
  const SearchProblem problem(QState(2, amps), 0);
  try {
    local_schedule(problem, {0.1, 1025});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::gap_too_small);
  }
}

TEST(LocalScheduleTest, MarkedStartNeedsNoTime) {
  const SearchProblem problem(QState::basis(2, 0), 0);
  const Schedule sched = local_schedule(problem);
  EXPECT_EQ(*sched.duration(), 0.0);
  EXPECT_NO_THROW(sched.validate());
}

TEST(ActionIntegralTest, Examples) {
  EXPECT_NEAR(action_integral(Schedule::linear(), 7.0), 3.5, 1e-13);
  EXPECT_NEAR(action_integral([](double) { return 1.0; }, 7.0), 7.0, 1e-13);
  EXPECT_THROW(action_integral(Schedule::linear(), 0.0), Error);
}

TEST(ActionIntegralTest, LocalScheduleRatioIsBounded) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int n = 2; n <= 10; ++n) {
    const auto problem = SearchProblem::uniform(n);
    const Schedule sched = local_schedule(problem);
    const double t = adiabatic_t_min(problem, sched);
    const double ratio = action_integral(sched, t) / (std::sqrt(double(1 << n)) / 4.0);
    EXPECT_GT(ratio, 0.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LT(hi / lo, 2.0);
}
