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

#include "pulsega/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pulsega/errors.hpp"

namespace pulsega {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Rejects keys outside `allowed` so that typos in config files surface.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ArgumentError(std::string(where) + " must be a JSON object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!names.contains(item.key())) {
      throw ArgumentError(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& field) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    it->get_to(field);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad value for '") + key + "': " + e.what());
  }
}

// JSON has no infinity; null stands for an infinite time constant.
void read_time_constant(const json& j, const char* key, double& field) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if (it->is_null()) {
    field = std::numeric_limits<double>::infinity();
    return;
  }
  read_field(j, key, field);
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish_write(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "line " + std::to_string(line) + ": not a number: '" + text + "'");
  }
  if (used != text.size()) {
    throw ParseError(line, "line " + std::to_string(line) + ": trailing characters in '" + text + "'");
  }
  return v;
}

void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".pulsega_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::DeutschJozsa ? "deutsch-jozsa" : "grover";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "deutsch-jozsa") return Algorithm::DeutschJozsa;
  if (text == "grover") return Algorithm::Grover;
  throw ArgumentError("algorithm must be 'deutsch-jozsa' or 'grover', got '" + text + "'");
}

void ExperimentConfig::validate() const {
  if (n_qubits < 2 || n_qubits > 4) throw ArgumentError("n_qubits must lie in [2, 4]");
  if (workers < 1) throw ArgumentError("workers must be at least 1");
  if (output_dir.empty()) throw ArgumentError("output_dir must not be empty");
  noise.validate();
  ga.validate();
}

void to_json(json& j, const NoiseParams& p) {
  auto time_constant = [](double t) { return std::isinf(t) ? json(nullptr) : json(t); };
  j = json{{"t1", time_constant(p.t1)},
           {"t2", time_constant(p.t2)},
           {"p_bit_flip", p.p_bit_flip},
           {"p_phase_flip", p.p_phase_flip},
           {"p_bit_phase_flip", p.p_bit_phase_flip},
           {"p_depolarizing", p.p_depolarizing}};
}

void from_json(const json& j, NoiseParams& p) {
  check_keys(j, {"t1", "t2", "p_bit_flip", "p_phase_flip", "p_bit_phase_flip", "p_depolarizing"},
             "noise");
  read_time_constant(j, "t1", p.t1);
  read_time_constant(j, "t2", p.t2);
  read_field(j, "p_bit_flip", p.p_bit_flip);
  read_field(j, "p_phase_flip", p.p_phase_flip);
  read_field(j, "p_bit_phase_flip", p.p_bit_phase_flip);
  read_field(j, "p_depolarizing", p.p_depolarizing);
}

void to_json(json& j, const GAConfig& c) {
  j = json{{"population_size", c.population_size},
           {"generations", c.generations},
           {"p_mut", c.p_mut},
           {"p_cross", c.p_cross},
           {"delta", c.delta},
           {"interval", c.interval},
           {"delta_p", c.delta_p},
           {"early_stop_rounds", c.early_stop_rounds},
           {"epsilon", c.epsilon},
           {"diversity_threshold", c.diversity_threshold},
           {"diversity_action", to_string(c.diversity_action)},
           {"tournament_size", c.tournament_size},
           {"elite_count", c.elite_count},
           {"sigma_scale", c.sigma_scale},
           {"replace_fraction", c.replace_fraction},
           {"bounds",
            {{"evo_min", c.bounds.evo_min},
             {"evo_max", c.bounds.evo_max},
             {"slot_min", c.bounds.slot_min},
             {"slot_max", c.bounds.slot_max}}},
           {"master_seed", c.master_seed}};
}

void from_json(const json& j, GAConfig& c) {
  check_keys(j,
             {"population_size", "generations", "p_mut", "p_cross", "delta", "interval",
              "delta_p", "early_stop_rounds", "epsilon", "diversity_threshold",
              "diversity_action", "tournament_size", "elite_count", "sigma_scale",
              "replace_fraction", "bounds", "master_seed"},
             "ga");
  read_field(j, "population_size", c.population_size);
  read_field(j, "generations", c.generations);
  read_field(j, "p_mut", c.p_mut);
  read_field(j, "p_cross", c.p_cross);
  read_field(j, "delta", c.delta);
  read_field(j, "interval", c.interval);
  read_field(j, "delta_p", c.delta_p);
  read_field(j, "early_stop_rounds", c.early_stop_rounds);
  read_field(j, "epsilon", c.epsilon);
  read_field(j, "diversity_threshold", c.diversity_threshold);
  if (j.contains("diversity_action")) {
    std::string action;
    read_field(j, "diversity_action", action);
    c.diversity_action = parse_diversity_action(action);
  }
  read_field(j, "tournament_size", c.tournament_size);
  read_field(j, "elite_count", c.elite_count);
  read_field(j, "sigma_scale", c.sigma_scale);
  read_field(j, "replace_fraction", c.replace_fraction);
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    check_keys(b, {"evo_min", "evo_max", "slot_min", "slot_max"}, "ga.bounds");
    read_field(b, "evo_min", c.bounds.evo_min);
    read_field(b, "evo_max", c.bounds.evo_max);
    read_field(b, "slot_min", c.bounds.slot_min);
    read_field(b, "slot_max", c.bounds.slot_max);
  }
  read_field(j, "master_seed", c.master_seed);
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"algorithm", to_string(c.algorithm)},
           {"n_qubits", c.n_qubits},
           {"noise", c.noise},
           {"ga", c.ga},
           {"workers", c.workers},
           {"output_dir", c.output_dir},
           {"run_baseline", c.run_baseline}};
}

void from_json(const json& j, ExperimentConfig& c) {
  check_keys(j, {"algorithm", "n_qubits", "noise", "ga", "workers", "output_dir", "run_baseline"},
             "config");
  if (j.contains("algorithm")) {
    std::string algorithm;
    read_field(j, "algorithm", algorithm);
    c.algorithm = parse_algorithm(algorithm);
  }
  read_field(j, "n_qubits", c.n_qubits);
  if (j.contains("noise")) from_json(j.at("noise"), c.noise);
  if (j.contains("ga")) from_json(j.at("ga"), c.ga);
  read_field(j, "workers", c.workers);
  read_field(j, "output_dir", c.output_dir);
  read_field(j, "run_baseline", c.run_baseline);
}

void to_json(json& j, const ExperimentResult& r) {
  j = json{{"baseline_fidelity", r.baseline_fidelity},
           {"best_fidelity", r.best_fidelity},
           {"best_avg_fidelity", r.best_avg_fidelity},
           {"best_generation", r.best_generation},
           {"wall_time_seconds", r.wall_time_seconds},
           {"log_path", r.log_path},
           {"best_genome_path", r.best_genome_path}};
}

void from_json(const json& j, ExperimentResult& r) {
  check_keys(j,
             {"baseline_fidelity", "best_fidelity", "best_avg_fidelity", "best_generation",
              "wall_time_seconds", "log_path", "best_genome_path"},
             "summary");
  read_field(j, "baseline_fidelity", r.baseline_fidelity);
  read_field(j, "best_fidelity", r.best_fidelity);
  read_field(j, "best_avg_fidelity", r.best_avg_fidelity);
  read_field(j, "best_generation", r.best_generation);
  read_field(j, "wall_time_seconds", r.wall_time_seconds);
  read_field(j, "log_path", r.log_path);
  read_field(j, "best_genome_path", r.best_genome_path);
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  ExperimentConfig cfg;
  from_json(j, cfg);
  return cfg;
}

Circuit build_circuit(Algorithm algorithm, std::size_t n_qubits) {
  if (algorithm == Algorithm::DeutschJozsa) {
    if (n_qubits < 2) throw ArgumentError("Deutsch-Jozsa needs at least 2 qubits");
    return build_deutsch_jozsa(n_qubits - 1);
  }
  return build_grover(n_qubits);
}

std::vector<Gene> baseline_genome(const Circuit& circuit) {
  std::vector<Gene> genes;
  genes.reserve(circuit.gates.size());
  for (const auto& g : circuit.gates) genes.push_back(baseline_gene(g));
  return genes;
}

void write_generation_log(std::span<const GenerationStats> stats, const fs::path& path) {
  if (stats.empty()) throw ArgumentError("write_generation_log: no generations");
  auto out = open_for_write(path);
  out << kGenerationLogHeader << '\n';
  for (const auto& s : stats) {
    out << s.gen << ',' << s.nevals << ',' << format_real(s.avg) << ',' << format_real(s.std)
        << ',' << format_real(s.min) << ',' << format_real(s.max) << ','
        << format_real(s.diversity) << ',' << format_real(s.p_mut) << ','
        << format_real(s.p_cross) << '\n';
  }
  finish_write(out, path);
}

std::vector<GenerationStats> read_generation_log(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "line 1: empty generation log");
  if (line != kGenerationLogHeader) throw ParseError(1, "line 1: unexpected header '" + line + "'");
  std::vector<GenerationStats> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) {
      throw ParseError(line_no, "line " + std::to_string(line_no) + ": expected 9 fields, got " +
                                    std::to_string(f.size()));
    }
    GenerationStats s;
    s.gen = static_cast<int>(parse_number(f[0], line_no));
    s.nevals = static_cast<std::size_t>(parse_number(f[1], line_no));
    s.avg = parse_number(f[2], line_no);
    s.std = parse_number(f[3], line_no);
    s.min = parse_number(f[4], line_no);
    s.max = parse_number(f[5], line_no);
    s.diversity = parse_number(f[6], line_no);
    s.p_mut = parse_number(f[7], line_no);
    s.p_cross = parse_number(f[8], line_no);
    if (s.std < 0.0) throw ParseError(line_no, "line " + std::to_string(line_no) + ": negative std");
    rows.push_back(s);
  }
  return rows;
}

json genome_to_json(const Individual& ind) {
  json genes = json::array();
  for (const auto& g : ind.genes) genes.push_back({{"evo_time", g.evo_time}, {"num_tslots", g.num_tslots}});
  return json{{"genes", genes},
              {"fitness", ind.fitness ? json(*ind.fitness) : json(nullptr)},
              {"seed", ind.seed}};
}

Individual genome_from_json(const json& j) {
  check_keys(j, {"genes", "fitness", "seed"}, "genome");
  Individual ind;
  try {
    for (const auto& g : j.at("genes")) {
      check_keys(g, {"evo_time", "num_tslots"}, "gene");
      ind.genes.push_back({g.at("evo_time").get<double>(), g.at("num_tslots").get<int>()});
    }
    if (j.contains("fitness") && !j.at("fitness").is_null()) ind.fitness = j.at("fitness").get<double>();
    if (j.contains("seed")) ind.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed genome JSON: ") + e.what());
  }
  return ind;
}

void write_json(const json& j, const fs::path& path) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish_write(out, path);
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

void emit_plot_data(const fs::path& log_path, const fs::path& out_path) {
  const auto rows = read_generation_log(log_path);
  auto out = open_for_write(out_path);
  out << "gen,avg,avg_minus_std,avg_plus_std,max\n";
  for (const auto& s : rows) {
    out << s.gen << ',' << format_real(s.avg) << ',' << format_real(s.avg - s.std) << ','
        << format_real(s.avg + s.std) << ',' << format_real(s.max) << '\n';
  }
  finish_write(out, out_path);
}

void write_waveform_csv(const PulseSchedule& schedule, std::size_t n_controls, const fs::path& path) {
  auto out = open_for_write(path);
  out << "time";
  for (std::size_t j = 0; j < n_controls; ++j) out << ",u_" << j;
  out << '\n';
  double t = 0.0;
  char buf[64];
  for (const auto& s : schedule.slices()) {
    if (s.amplitudes.size() != n_controls) throw ArgumentError("write_waveform_csv: control count mismatch");
    std::snprintf(buf, sizeof buf, "%.9g", t);
    out << buf;
    for (double u : s.amplitudes) {
      std::snprintf(buf, sizeof buf, ",%.9g", u);
      out << buf;
    }
    out << '\n';
    t += s.duration;
  }
  finish_write(out, path);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir(cfg.output_dir);
  ensure_writable_dir(dir);

  const Circuit circuit = build_circuit(cfg.algorithm, cfg.n_qubits);
  const QuantumFitness fitness(circuit, cfg.noise, cfg.ga.master_seed);
  const std::size_t n_controls = fitness.processor().n_controls();

  Individual baseline;
  baseline.genes = baseline_genome(circuit);
  baseline.seed = cfg.ga.master_seed;
  baseline.fitness = fitness.evaluate(baseline.genes).fitness;

  const auto start = std::chrono::steady_clock::now();
  const RunResult run_result =
      run(cfg.ga, circuit.gates.size(), [&](const Individual& ind) { return fitness(ind); },
          cfg.workers);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string stem = circuit.name;
  const fs::path log_path = dir / (stem + "_With_Opt_log.csv");
  const fs::path genome_path = dir / (stem + "_best_genome.json");
  write_generation_log(run_result.log, log_path);
  emit_plot_data(log_path, dir / (stem + "_With_Opt_plot.csv"));
  write_json(genome_to_json(run_result.best), genome_path);

  const PulseSchedule best_schedule = fitness.schedule(run_result.best.genes);
  write_schedule_csv((dir / (stem + "_best_schedule.csv")).string(), best_schedule, n_controls);
  write_waveform_csv(best_schedule, n_controls, dir / (stem + "_best_waveform.csv"));
  if (cfg.run_baseline) {
    const PulseSchedule base_schedule = fitness.schedule(baseline.genes);
    write_schedule_csv((dir / (stem + "_baseline_schedule.csv")).string(), base_schedule,
                       n_controls);
    write_waveform_csv(base_schedule, n_controls, dir / (stem + "_baseline_waveform.csv"));
  }

  ExperimentResult result;
  result.baseline_fidelity = *baseline.fitness;
  result.best_fidelity = *run_result.best.fitness;
  for (const auto& s : run_result.log) result.best_avg_fidelity = std::max(result.best_avg_fidelity, s.avg);
  result.best_generation = run_result.best_generation;
  result.wall_time_seconds = wall;
  result.log_path = log_path.string();
  result.best_genome_path = genome_path.string();
  write_json(json(result), dir / (stem + "_summary.json"));
  return result;
}

}  // namespace pulsega
