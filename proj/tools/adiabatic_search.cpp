// Command-line driver for the adiabatic search experiments.
//
//   adiabatic_search <spectrum|entanglement|sweep|scaling|grover|evolve> [flags]

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "adiabatic/cli/commands.hpp"
#include "adiabatic/cli/config.hpp"

namespace {

using adiabatic::cli::ExperimentConfig;

struct Flags {
  std::optional<int> n;
  std::optional<long long> marked;
  std::optional<std::string> schedule;
  std::optional<double> epsilon;
  std::optional<int> grid;
  std::optional<double> T;
  std::optional<std::string> initial;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<int> resolution;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::optional<int> k_max;
  std::optional<int> steps;
  std::optional<int> record_every;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--n", f.n, "qubit count");
  cmd.add_option("--marked", f.marked, "marked basis index");
  cmd.add_option("--schedule", f.schedule, "linear or local");
  cmd.add_option("--epsilon", f.epsilon, "adiabatic accuracy parameter");
  cmd.add_option("--grid", f.grid, "grid points in s");
  cmd.add_option("--T", f.T, "total evolution time (default 10 T_min)");
  cmd.add_option("--initial", f.initial, "uniform, bell or file:<path>");
  cmd.add_option("--out", f.out, "write CSV here instead of stdout");
  cmd.add_option("--config", f.config, "JSON config; flags override its fields");
  cmd.add_option("--resolution", f.resolution, "sweep grid resolution");
  cmd.add_option("--n-min", f.n_min, "smallest n for scaling");
  cmd.add_option("--n-max", f.n_max, "largest n for scaling");
  cmd.add_option("--k-max", f.k_max, "Grover iterations to record");
  cmd.add_option("--steps", f.steps, "propagation steps");
  cmd.add_option("--record-every", f.record_every, "record every k-th propagation step");
}

ExperimentConfig build_config(const Flags& f) {
  using namespace adiabatic::cli;
  ExperimentConfig c = f.config ? load_config(*f.config) : ExperimentConfig{};
  if (f.n) c.n = *f.n;
  if (f.marked) c.marked = *f.marked;
  if (f.schedule) c.schedule = parse_schedule(*f.schedule);
  if (f.epsilon) c.epsilon = *f.epsilon;
  if (f.grid) c.grid = *f.grid;
  if (f.T) c.T = *f.T;
  if (f.initial) c.initial = parse_initial(*f.initial);
  if (f.out) c.out = *f.out;
  if (f.resolution) c.sweep_resolution = *f.resolution;
  if (f.n_min) c.n_min = *f.n_min;
  if (f.n_max) c.n_max = *f.n_max;
  if (f.k_max) c.k_max = *f.k_max;
  if (f.steps) c.steps = *f.steps;
  if (f.record_every) c.record_every = *f.record_every;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic quantum search: spectra, entanglement, runtimes and Grover cross-checks"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::string> about{
      {"spectrum", "instantaneous spectrum, gap and runtime estimate"},
      {"entanglement", "ground-state entanglement along the schedule"},
      {"sweep", "entanglement and runtime over a family of two-qubit starts"},
      {"scaling", "runtime and action scaling with register size"},
      {"grover", "discrete Grover success probability per iteration"},
      {"evolve", "Schroedinger propagation and final fidelities"},
  };
  for (const auto& name : adiabatic::cli::command_names()) {
    add_flags(*app.add_subcommand(name, about.at(name)), flags);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return adiabatic::cli::exit_config;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return adiabatic::cli::run_command(command, build_config(flags), std::cout, std::cerr);
  } catch (const adiabatic::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return adiabatic::cli::exit_config;
  }
}
