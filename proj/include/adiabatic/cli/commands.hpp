#pragma once

// Subcommands of the adiabatic-search driver. Each writes CSV to `out` and
// diagnostics to `err`; run_command() maps failures onto exit statuses:
// 0 success, 2 configuration error, 3 numerical-contract violation.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "adiabatic/cli/config.hpp"
#include "adiabatic/cli/csv.hpp"
#include "adiabatic/entanglement.hpp"
#include "adiabatic/evolution.hpp"
#include "adiabatic/grover.hpp"
#include "adiabatic/hamiltonian.hpp"

namespace adiabatic::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3 };

inline AdiabaticCriterion criterion_for(const ExperimentConfig& config) {
  return AdiabaticCriterion{config.epsilon, config.grid, CriterionMode::automatic};
}

inline Schedule schedule_for(const SearchProblem& problem, const ExperimentConfig& config) {
  if (config.schedule == ScheduleKind::local) {
    return local_schedule(problem, criterion_for(config));
  }
  return Schedule::linear();
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Pearson correlation; NaN when either sample has no spread.
inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  if (x.size() < 2) return std::nan("");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 1e-300 || syy <= 1e-300) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

inline void emit_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

inline int cmd_spectrum(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const SearchProblem problem = make_problem(config, warnings);
  emit_warnings(warnings, err);
  const Schedule schedule = schedule_for(problem, config);
  const auto trace = spectrum_trace(problem, schedule, config.grid);
  const RuntimeEstimate runtime = adiabatic_runtime(problem, schedule, criterion_for(config));

  CsvWriter csv(out);
  std::vector<std::string> columns{"s"};
  for (Index k = 0; k < problem.dim(); ++k) columns.push_back("E" + std::to_string(k));
  columns.insert(columns.end(), {"gap", "matrix_element"});
  csv.header(columns);
  for (const auto& p : trace) {
    csv.cell(p.s);
    for (Index k = 0; k < p.energies.size(); ++k) csv.cell(p.energies(k));
    csv.cell(p.gap).cell(p.matrix_element).end_row();
  }
  csv.summary("g_min", runtime.gap_minimum.gap);
  csv.summary("s_star", runtime.gap_minimum.s);
  csv.summary("T_min", runtime.t_min);
  csv.summary("schedule", to_string(schedule.kind()));
  return exit_ok;
}

inline std::vector<int> entropy_cut(int qubits) {
  std::vector<int> cut(std::size_t(std::max(1, qubits / 2)));
  std::iota(cut.begin(), cut.end(), 0);
  return cut;
}

inline int cmd_entanglement(const ExperimentConfig& config, std::ostream& out,
                            std::ostream& err) {
  if (config.n < 2) throw ConfigError("entanglement needs at least two qubits");
  std::vector<std::string> warnings;
  const SearchProblem problem = make_problem(config, warnings);
  emit_warnings(warnings, err);
  const Schedule schedule = schedule_for(problem, config);
  const EvolutionTrace ground = ground_state_trace(problem, schedule, config.grid);

  CsvWriter csv(out);
  std::vector<double> s, entropy;
  if (config.n == 2) {
    csv.header({"s", "concurrence", "entropy", "mu_plus", "mu_minus", "fidelity_marked"});
    for (const auto& p : entanglement_trace(ground)) {
      csv.cell(p.s).cell(p.concurrence).cell(p.entropy).cell(p.mu_plus).cell(p.mu_minus);
      csv.cell(p.fidelity_marked).end_row();
      s.push_back(p.s);
      entropy.push_back(p.entropy);
    }
  } else {
    // No two-qubit concurrence beyond n = 2: report the half-register entropy.
    const auto cut = entropy_cut(config.n);
    csv.header({"s", "entropy", "fidelity_marked"});
    for (const auto& sample : ground.samples) {
      const double e = entropy_of_entanglement(sample.state, cut);
      csv.cell(sample.s).cell(e).cell(sample.fidelity_marked).end_row();
      s.push_back(sample.s);
      entropy.push_back(e);
    }
  }
  const auto peak = std::max_element(entropy.begin(), entropy.end());
  csv.summary("initial_entropy", entropy.front());
  csv.summary("final_entropy", entropy.back());
  csv.summary("max_entropy", *peak);
  csv.summary("s_of_max", s[std::size_t(peak - entropy.begin())]);
  return exit_ok;
}

struct SweepRow {
  std::string label;
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0;
  double initial_entropy = 0, max_entropy = 0, s_of_max = 0, final_entropy = 0;
  double g_min = 0, s_of_gmin = 0, t_min = 0;
  bool monotone_decreasing = false;
};

/// Real states (c0, c1 = c2, c3) on the unit sphere with c0 >= 0, plus the
/// uniform and Bell anchors. c0 = cos a, c1 = c2 = sin a cos b / sqrt 2,
/// c3 = sin a sin b for a = i (pi/2) / R, b = j pi / R.
inline std::vector<std::pair<std::string, std::array<double, 4>>> sweep_family(int resolution) {
  std::vector<std::pair<std::string, std::array<double, 4>>> out;
  out.push_back({"uniform", {0.5, 0.5, 0.5, 0.5}});
  out.push_back({"bell", {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)}});
  for (int i = 0; i <= resolution; ++i) {
    const double a = i * (std::numbers::pi / 2.0) / resolution;
    for (int j = 0; j < 2 * resolution; ++j) {
      const double b = j * std::numbers::pi / resolution;
      const double c12 = std::sin(a) * std::cos(b) / std::sqrt(2.0);
      out.push_back({"grid", {std::cos(a), c12, c12, std::sin(a) * std::sin(b)}});
    }
  }
  return out;
}

/// Sweep states whose marked amplitude is below this are skipped.
inline constexpr double sweep_min_overlap = 1e-9;

inline SweepRow sweep_row(const std::string& label, const std::array<double, 4>& c,
                          const ExperimentConfig& config) {
  Vector amps(4);
  for (int i = 0; i < 4; ++i) amps(i) = c[std::size_t(i)];
  const SearchProblem problem(QState::normalized(2, amps), config.marked);
  const Schedule schedule = schedule_for(problem, config);
  const auto ent = entanglement_trace(ground_state_trace(problem, schedule, config.grid));
  const RuntimeEstimate runtime = adiabatic_runtime(problem, schedule, criterion_for(config));

  SweepRow row{label, c[0], c[1], c[2], c[3]};
  row.initial_entropy = ent.front().entropy;
  row.final_entropy = ent.back().entropy;
  const auto peak = std::max_element(ent.begin(), ent.end(),
                                     [](const auto& a, const auto& b) { return a.entropy < b.entropy; });
  row.max_entropy = peak->entropy;
  row.s_of_max = peak->s;
  row.monotone_decreasing = true;
  for (std::size_t k = 1; k < ent.size(); ++k) {
    if (ent[k].entropy > ent[k - 1].entropy + 1e-12) {
      row.monotone_decreasing = false;
      break;
    }
  }
  row.g_min = runtime.gap_minimum.gap;
  row.s_of_gmin = runtime.gap_minimum.s;
  row.t_min = runtime.t_min;
  return row;
}

inline int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  if (config.n != 2) throw ConfigError("sweep runs over two-qubit initial states (n = 2)");
  std::vector<SweepRow> rows;
  int skipped = 0;
  for (const auto& [label, c] : sweep_family(config.sweep_resolution)) {
    if (!(std::abs(c[std::size_t(config.marked)]) > sweep_min_overlap)) {
      ++skipped;
      continue;
    }
    rows.push_back(sweep_row(label, c, config));
  }
  if (skipped > 0) err << "skipped " << skipped << " states without marked-state overlap\n";

  CsvWriter csv(out);
  csv.header({"label", "c0", "c1", "c2", "c3", "initial_entropy", "max_entropy", "s_of_max",
              "final_entropy", "g_min", "s_of_gmin", "T_min", "monotone_decreasing", "c0_ge_c3"});
  std::vector<double> e0, gmin, tmin;
  int near_marked = 0, near_marked_monotone = 0;
  for (const auto& r : rows) {
    const bool near = r.c0 >= r.c3;
    csv.cell(r.label).cell(r.c0).cell(r.c1).cell(r.c2).cell(r.c3);
    csv.cell(r.initial_entropy).cell(r.max_entropy).cell(r.s_of_max).cell(r.final_entropy);
    csv.cell(r.g_min).cell(r.s_of_gmin).cell(r.t_min).cell(r.monotone_decreasing).cell(near);
    csv.end_row();
    e0.push_back(r.initial_entropy);
    gmin.push_back(r.g_min);
    tmin.push_back(r.t_min);
    if (near) {
      ++near_marked;
      if (r.monotone_decreasing || r.s_of_max == 0.0) ++near_marked_monotone;
    }
  }
  csv.summary("rows", int(rows.size()));
  csv.summary("skipped", skipped);
  csv.summary("corr_initial_entropy_g_min", correlation(e0, gmin));
  csv.summary("corr_initial_entropy_T_min", correlation(e0, tmin));
  csv.summary("c0_ge_c3_rows", near_marked);
  csv.summary("c0_ge_c3_monotone_rows", near_marked_monotone);
  return exit_ok;
}

struct ScalingRow {
  int n = 0;
  Index N = 0;
  double t_min_linear = 0, t_min_local = 0;
  int k0 = 0;
  double action = 0, action_ratio = 0;
};

inline ScalingRow scaling_row(int n, const AdiabaticCriterion& crit) {
  const SearchProblem problem = SearchProblem::uniform(n, 0);
  ScalingRow row{n, problem.dim()};
  row.t_min_linear = adiabatic_t_min(problem, Schedule::linear(), crit);
  const Schedule local = local_schedule(problem, crit);
  row.t_min_local = adiabatic_t_min(problem, local, crit);
  row.k0 = grover_optimal_iterations(problem.dim());
  row.action = action_integral(local, row.t_min_local);
  row.action_ratio = row.action / (std::sqrt(double(problem.dim())) / 4.0);
  return row;
}

struct ScalingFit {
  double slope_linear = 0, slope_local = 0, action_ratio_spread = 0;
};

inline ScalingFit fit_scaling(const std::vector<ScalingRow>& rows) {
  std::vector<double> logn, lin, loc, ratio;
  for (const auto& r : rows) {
    logn.push_back(std::log(double(r.N)));
    lin.push_back(std::log(r.t_min_linear));
    loc.push_back(std::log(r.t_min_local));
    ratio.push_back(r.action_ratio);
  }
  ScalingFit fit;
  if (rows.size() >= 2) {
    fit.slope_linear = fit_slope(logn, lin);
    fit.slope_local = fit_slope(logn, loc);
  } else {
    fit.slope_linear = fit.slope_local = std::nan("");
  }
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  fit.action_ratio_spread = *hi / *lo;
  return fit;
}

inline int cmd_scaling(const ExperimentConfig& config, std::ostream& out, std::ostream&) {
  if (!(2 <= config.n_min && config.n_min <= config.n_max && config.n_max <= 10)) {
    throw ConfigError("scaling needs 2 <= n_min <= n_max <= 10");
  }
  const AdiabaticCriterion crit = criterion_for(config);
  std::vector<ScalingRow> rows;
  for (int n = config.n_min; n <= config.n_max; ++n) rows.push_back(scaling_row(n, crit));
  const ScalingFit fit = fit_scaling(rows);

  CsvWriter csv(out);
  csv.header({"n", "N", "T_min_linear", "T_min_local", "k0", "action", "action_ratio"});
  for (const auto& r : rows) {
    csv.cell(r.n).cell(static_cast<long long>(r.N)).cell(r.t_min_linear).cell(r.t_min_local);
    csv.cell(r.k0).cell(r.action).cell(r.action_ratio).end_row();
  }
  csv.summary("slope_linear", fit.slope_linear);
  csv.summary("slope_local", fit.slope_local);
  csv.summary("action_ratio_spread", fit.action_ratio_spread);
  csv.summary("epsilon", config.epsilon);
  return exit_ok;
}

inline int cmd_grover(const ExperimentConfig& config, std::ostream& out, std::ostream&) {
  const SearchProblem problem(QState::uniform(config.n), config.marked);
  const int k0 = grover_optimal_iterations(problem.dim());
  const int k_max = config.k_max.value_or(std::max(1, 2 * k0));
  const GroverRun run = grover_search(problem, k_max);

  CsvWriter csv(out);
  csv.header({"k", "success_probability"});
  for (const auto& it : run.iterations) csv.cell(it.k).cell(it.success_probability).end_row();
  csv.summary("k0", k0);
  if (k0 <= k_max) csv.summary("P_k0", run.iterations[std::size_t(k0)].success_probability);
  csv.summary("bound", 1.0 - 1.0 / double(problem.dim()));
  return exit_ok;
}

inline int cmd_evolve(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const SearchProblem problem = make_problem(config, warnings);
  emit_warnings(warnings, err);
  const Schedule schedule = schedule_for(problem, config);
  const double t_min = adiabatic_t_min(problem, schedule, criterion_for(config));
  const double T = config.T.value_or(10.0 * t_min);
  const int steps = config.steps.value_or(default_steps(T));
  const int every = config.record_every.value_or(std::max(1, steps / 1000));
  const EvolutionTrace trace = propagate(problem, schedule, T, steps, {every});

  CsvWriter csv(out);
  csv.header({"s", "fidelity_ground", "fidelity_marked", "norm_drift"});
  for (const auto& p : trace.samples) {
    csv.cell(p.s).cell(p.fidelity_ground).cell(p.fidelity_marked).cell(p.norm_drift).end_row();
  }
  const double target = 1.0 - config.epsilon * config.epsilon;
  csv.summary("T", T);
  csv.summary("T_min", t_min);
  csv.summary("steps", steps);
  csv.summary("final_fidelity_marked", trace.final().fidelity_marked);
  csv.summary("target", target);
  csv.summary("meets_target", trace.final().fidelity_marked >= target);
  csv.summary("max_norm_drift", trace.max_norm_drift());
  return exit_ok;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "entanglement", "sweep",
                                              "scaling",  "grover",       "evolve"};
  return names;
}

/// Runs one subcommand, writing to config.out when set, else to `out`.
inline int run_command(const std::string& name, const ExperimentConfig& config, std::ostream& out,
                       std::ostream& err) {
  using Command = int (*)(const ExperimentConfig&, std::ostream&, std::ostream&);
  Command cmd = nullptr;
  if (name == "spectrum") cmd = cmd_spectrum;
  else if (name == "entanglement") cmd = cmd_entanglement;
  else if (name == "sweep") cmd = cmd_sweep;
  else if (name == "scaling") cmd = cmd_scaling;
  else if (name == "grover") cmd = cmd_grover;
  else if (name == "evolve") cmd = cmd_evolve;
  if (!cmd) {
    err << "error: unknown command '" << name << "'\n";
    return exit_config;
  }
  try {
    config.validate();
    if (config.out) {
      std::ofstream file(*config.out, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + *config.out + "'");
      return cmd(config, file, err);
    }
    return cmd(config, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? exit_numerical : exit_config;
  }
}

}  // namespace adiabatic::cli
