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

#pragma once

/**
 * @file
 * Experiment configuration, baseline-versus-optimized runs and the CSV/JSON
 * artifacts they leave behind.
 */

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pulsega/circuits.hpp"
#include "pulsega/ga.hpp"
#include "pulsega/noise.hpp"
#include "pulsega/pulse.hpp"

namespace pulsega {

enum class Algorithm { DeutschJozsa, Grover };

std::string to_string(Algorithm algorithm);
/// Accepts "deutsch-jozsa" or "grover".
Algorithm parse_algorithm(const std::string& text);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::DeutschJozsa;
  std::size_t n_qubits = 3;  // total, including the Deutsch-Jozsa ancilla
  NoiseParams noise{50.0, 30.0, 0.02, 0.02, 0.0, 0.0};
  GAConfig ga;
  std::size_t workers = 1;
  std::string output_dir = "results";
  bool run_baseline = true;

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

struct ExperimentResult {
  double baseline_fidelity = 0.0;
  double best_fidelity = 0.0;
  double best_avg_fidelity = 0.0;
  int best_generation = 0;
  double wall_time_seconds = 0.0;
  std::string log_path;
  std::string best_genome_path;
  bool operator==(const ExperimentResult&) const = default;
};

void to_json(nlohmann::json& j, const NoiseParams& p);
void from_json(const nlohmann::json& j, NoiseParams& p);
void to_json(nlohmann::json& j, const GAConfig& c);
void from_json(const nlohmann::json& j, GAConfig& c);
void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
void to_json(nlohmann::json& j, const ExperimentResult& r);
void from_json(const nlohmann::json& j, ExperimentResult& r);

/// Reads a config file; keys that are absent keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

/// The benchmark circuit the config describes.
Circuit build_circuit(Algorithm algorithm, std::size_t n_qubits);

/// baseline_gene for every gate of the circuit.
std::vector<Gene> baseline_genome(const Circuit& circuit);

inline constexpr const char* kGenerationLogHeader =
    "gen,nevals,avg,std,min,max,diversity,p_mut,p_cross";

void write_generation_log(std::span<const GenerationStats> stats,
                          const std::filesystem::path& path);
std::vector<GenerationStats> read_generation_log(const std::filesystem::path& path);

/// `{"genes": [{"evo_time": r, "num_tslots": i}, ...], "fitness": r, "seed": i}`
nlohmann::json genome_to_json(const Individual& ind);
Individual genome_from_json(const nlohmann::json& j);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

/// gen,avg,avg_minus_std,avg_plus_std,max for every row of a generation log.
void emit_plot_data(const std::filesystem::path& log_path, const std::filesystem::path& out_path);

/// time,u_0,...,u_{m-1}: one row per slice, time at the slice start.
void write_waveform_csv(const PulseSchedule& schedule, std::size_t n_controls,
                        const std::filesystem::path& path);

/// Builds the circuit, scores the baseline genome, runs the GA and writes
/// every artifact into cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace pulsega
