// Copyright 2026 The pulsega Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run experiments, emit plot data, print circuits.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pulsega/errors.hpp"
#include "pulsega/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgument = 1;
constexpr int kExitRuntime = 2;

struct RunFlags {
  std::string config;
  std::string algorithm;
  std::size_t qubits = 0;
  std::size_t population = 0;
  int generations = 0;
  double t1 = 0, t2 = 0, p_bit_flip = 0, p_phase_flip = 0, p_bit_phase_flip = 0,
         p_depolarizing = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::string output_dir;
  int early_stop_rounds = 0;
  double diversity_threshold = 0;
  std::string diversity_action;
  bool no_baseline = false;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace pulsega;
  CLI::App app{"Genetic search over gate pulse durations and slice counts under noise"};
  app.require_subcommand(1);

  RunFlags f;
  auto* run_cmd = app.add_subcommand("run", "Run a baseline-versus-optimized experiment");
  run_cmd->add_option("--config", f.config, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  auto* o_algorithm = run_cmd->add_option("--algorithm", f.algorithm, "deutsch-jozsa or grover")
                          ->check(CLI::IsMember({"deutsch-jozsa", "grover"}));
  auto* o_qubits = run_cmd->add_option("--qubits", f.qubits, "Total qubits, ancilla included");
  auto* o_population = run_cmd->add_option("--population", f.population);
  auto* o_generations = run_cmd->add_option("--generations", f.generations);
  auto* o_t1 = run_cmd->add_option("--t1", f.t1);
  auto* o_t2 = run_cmd->add_option("--t2", f.t2);
  auto* o_pbf = run_cmd->add_option("--p-bit-flip", f.p_bit_flip);
  auto* o_ppf = run_cmd->add_option("--p-phase-flip", f.p_phase_flip);
  auto* o_pbpf = run_cmd->add_option("--p-bit-phase-flip", f.p_bit_phase_flip);
  auto* o_pdep = run_cmd->add_option("--p-depolarizing", f.p_depolarizing);
  auto* o_seed = run_cmd->add_option("--seed", f.seed);
  auto* o_workers = run_cmd->add_option("--workers", f.workers);
  auto* o_out = run_cmd->add_option("--output-dir", f.output_dir);
  auto* o_rounds = run_cmd->add_option("--early-stop-rounds", f.early_stop_rounds);
  auto* o_div = run_cmd->add_option("--diversity-threshold", f.diversity_threshold);
  auto* o_action = run_cmd->add_option("--diversity-action", f.diversity_action)
                       ->check(CLI::IsMember({"mutate", "replace"}));
  run_cmd->add_flag("--no-baseline", f.no_baseline, "Skip baseline schedule export");

  std::string log_path, plot_path, schedule_path, waveform_path;
  auto* plot_cmd = app.add_subcommand("plot", "Turn a generation log into plot-ready CSV");
  plot_cmd->add_option("--log", log_path, "Generation log CSV")->required();
  plot_cmd->add_option("--output", plot_path, "Plot CSV to write")->required();
  auto* o_schedule = plot_cmd->add_option("--schedule", schedule_path, "Schedule CSV to convert");
  plot_cmd->add_option("--waveform", waveform_path, "Waveform CSV to write")->needs(o_schedule);

  std::string circ_algorithm = "deutsch-jozsa";
  std::size_t circ_qubits = 3;
  auto* circuit_cmd = app.add_subcommand("circuit", "Print a benchmark circuit as a gate list");
  circuit_cmd->add_option("--algorithm", circ_algorithm)
      ->check(CLI::IsMember({"deutsch-jozsa", "grover"}));
  circuit_cmd->add_option("--qubits", circ_qubits);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitArgument;
  }

  try {
    if (*run_cmd) {
      ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
      if (*o_algorithm) cfg.algorithm = parse_algorithm(f.algorithm);
      if (*o_qubits) cfg.n_qubits = f.qubits;
      if (*o_population) cfg.ga.population_size = f.population;
      if (*o_generations) cfg.ga.generations = f.generations;
      if (*o_t1) cfg.noise.t1 = f.t1;
      if (*o_t2) cfg.noise.t2 = f.t2;
      if (*o_pbf) cfg.noise.p_bit_flip = f.p_bit_flip;
      if (*o_ppf) cfg.noise.p_phase_flip = f.p_phase_flip;
      if (*o_pbpf) cfg.noise.p_bit_phase_flip = f.p_bit_phase_flip;
      if (*o_pdep) cfg.noise.p_depolarizing = f.p_depolarizing;
      if (*o_seed) cfg.ga.master_seed = f.seed;
      if (*o_workers) cfg.workers = f.workers;
      if (*o_out) cfg.output_dir = f.output_dir;
      if (*o_rounds) cfg.ga.early_stop_rounds = f.early_stop_rounds;
      if (*o_div) cfg.ga.diversity_threshold = f.diversity_threshold;
      if (*o_action) cfg.ga.diversity_action = parse_diversity_action(f.diversity_action);
      if (f.no_baseline) cfg.run_baseline = false;
      cfg.validate();
      const ExperimentResult result = run_experiment(cfg);
      std::cout << nlohmann::json(result).dump(2) << '\n';
    } else if (*plot_cmd) {
      emit_plot_data(log_path, plot_path);
      if (!schedule_path.empty()) {
        const PulseSchedule schedule = read_schedule_csv(schedule_path);
        const std::size_t m = schedule.empty() ? 0 : schedule.slices().front().amplitudes.size();
        write_waveform_csv(schedule, m, waveform_path.empty() ? schedule_path + ".waveform.csv"
                                                              : waveform_path);
      }
    } else if (*circuit_cmd) {
      const Circuit c = build_circuit(parse_algorithm(circ_algorithm), circ_qubits);
      write_circuit_text(std::cout, c);
    }
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitArgument;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
