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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pulsega/errors.hpp"
#include "pulsega/harness.hpp"

using namespace pulsega;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pulsega_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::DeutschJozsa;
  cfg.n_qubits = 2;
  cfg.ga.population_size = 6;
  cfg.ga.generations = 3;
  cfg.ga.master_seed = 7;
  cfg.output_dir = out.string();
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PULSEGA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("grover") == Algorithm::Grover);
  CHECK(to_string(Algorithm::DeutschJozsa) == "deutsch-jozsa");
  CHECK_THROWS_AS(parse_algorithm("shor"), ArgumentError);
}

TEST_CASE("config validation and circuits") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.workers = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = {};
  cfg.n_qubits = 5;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  CHECK(build_circuit(Algorithm::DeutschJozsa, 4).gates.size() == 11);
  CHECK(build_circuit(Algorithm::Grover, 2).n_qubits == 2);
  const auto genome = baseline_genome(build_circuit(Algorithm::DeutschJozsa, 2));
  CHECK(genome.size() == 5);
  CHECK(genome[3] == Gene{3.0, 12});
}

TEST_CASE("config JSON round trip and overrides") {
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::Grover;
  cfg.n_qubits = 4;
  cfg.noise.t2 = std::numeric_limits<double>::infinity();
  cfg.ga.diversity_action = DiversityAction::Replace;
  cfg.ga.bounds.slot_max = 25;
  cfg.ga.master_seed = 0xfeedbeefULL;
  cfg.workers = 6;
  const nlohmann::json j = cfg;
  CHECK(j.at("noise").at("t2").is_null());
  CHECK(j.get<ExperimentConfig>() == cfg);

  const fs::path dir = scratch("config");
  std::ofstream(dir / "partial.json") << R"({"algorithm": "grover", "ga": {"population_size": 12}})";
  const ExperimentConfig loaded = load_config(dir / "partial.json");
  CHECK(loaded.algorithm == Algorithm::Grover);
  CHECK(loaded.ga.population_size == 12);
  CHECK(loaded.ga.generations == GAConfig{}.generations);

  std::ofstream(dir / "typo.json") << R"({"populaton": 3})";
  CHECK_THROWS_AS(load_config(dir / "typo.json"), ArgumentError);
  std::ofstream(dir / "broken.json") << "{";
  CHECK_THROWS(load_config(dir / "broken.json"));
  CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
}

TEST_CASE("shipped presets load") {
  for (const char* name : {"short.json", "long.json"}) {
    const ExperimentConfig cfg = load_config(fs::path(PULSEGA_SOURCE_DIR) / "configs" / name);
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.noise.t1 == 50.0);
    CHECK(cfg.noise.t2 == 30.0);
  }
  CHECK(load_config(fs::path(PULSEGA_SOURCE_DIR) / "configs" / "short.json").ga.population_size == 50);
  const auto long_cfg = load_config(fs::path(PULSEGA_SOURCE_DIR) / "configs" / "long.json");
  CHECK(long_cfg.ga.population_size == 250);
  CHECK(long_cfg.ga.generations == 500);
}

TEST_CASE("generation log format") {
  const fs::path dir = scratch("log");
  std::vector<GenerationStats> stats(3);
  for (int g = 0; g < 3; ++g) stats[g] = {g, 10, 0.1 * g, 0.01, 0.0, 0.2 * g, 1.5, 0.2, 0.7};
  write_generation_log(stats, dir / "log.csv");
  const auto lines = lines_of(dir / "log.csv");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "gen,nevals,avg,std,min,max,diversity,p_mut,p_cross");
  CHECK(lines[2] == "1,10,0.100000,0.010000,0.000000,0.200000,1.500000,0.200000,0.700000");
  const auto back = read_generation_log(dir / "log.csv");
  REQUIRE(back.size() == 3);
  CHECK(back[2].max == doctest::Approx(0.4));

  std::ofstream(dir / "bad.csv") << kGenerationLogHeader << "\n0,1,0.5\n";
  try {
    read_generation_log(dir / "bad.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("plot data brackets the average") {
  const fs::path dir = scratch("plot");
  std::vector<GenerationStats> one(1);
  one[0] = {0, 5, 0.4, 0.05, 0.3, 0.5, 1.0, 0.2, 0.7};
  write_generation_log(one, dir / "one.csv");
  emit_plot_data(dir / "one.csv", dir / "one_plot.csv");
  const auto lines = lines_of(dir / "one_plot.csv");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "gen,avg,avg_minus_std,avg_plus_std,max");
  const auto row = split_numbers(lines[1]);
  CHECK(row[2] <= row[1]);
  CHECK(row[1] <= row[3]);
  CHECK(row[2] == doctest::Approx(0.35));
}

TEST_CASE("genome JSON round trip") {
  Individual ind;
  ind.genes = {{1.25, 10}, {3.0, 12}};
  ind.fitness = 0.4375;
  ind.seed = 18446744073709551557ULL;
  const nlohmann::json j = genome_to_json(ind);
  CHECK(j.at("genes").at(1).at("num_tslots") == 12);
  const Individual back = genome_from_json(j);
  CHECK(back.genes == ind.genes);
  CHECK(back.fitness == ind.fitness);
  CHECK(back.seed == ind.seed);
}

TEST_CASE("summary JSON round trip") {
  ExperimentResult r{0.25, 0.5, 0.375, 7, 1.5, "a/log.csv", "a/best.json"};
  const nlohmann::json j = r;
  CHECK(nlohmann::json::parse(j.dump()).get<ExperimentResult>() == r);
}

TEST_CASE("unwritable output directory fails before any compute") {
  const fs::path dir = scratch("blocked");
  std::ofstream(dir / "file") << "x";
  ExperimentConfig cfg = small_config(dir / "file" / "sub");
  cfg.ga.generations = 1000;  // would take minutes if it ran
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(run_experiment(cfg), IoError);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(2));
}

TEST_CASE("an experiment writes consistent artifacts") {
  const fs::path dir = scratch("experiment");
  const ExperimentConfig cfg = small_config(dir / "a");
  const ExperimentResult r = run_experiment(cfg);
  CHECK(r.baseline_fidelity >= 0.0);
  CHECK(r.baseline_fidelity <= 1.0);
  CHECK(r.best_fidelity >= r.best_avg_fidelity);
  CHECK(r.wall_time_seconds > 0.0);
  CHECK(fs::path(r.log_path).filename() == "DeutschJozsa_2Q_With_Opt_log.csv");
  const auto log = read_generation_log(r.log_path);
  CHECK(log.size() == 4);
  double best_max = 0.0;
  for (const auto& s : log) best_max = std::max(best_max, s.max);
  CHECK(r.best_fidelity == doctest::Approx(best_max).epsilon(1e-6));

  const Individual best = genome_from_json(read_json(r.best_genome_path));
  CHECK(best.genes.size() == 5);
  int slots = 0;
  for (const auto& g : best.genes) slots += g.num_tslots;
  const auto waveform = lines_of(dir / "a" / "DeutschJozsa_2Q_best_waveform.csv");
  CHECK(waveform.size() == static_cast<std::size_t>(slots) + 1);
  CHECK(waveform[0].rfind("time,u_0", 0) == 0);
  CHECK(fs::exists(dir / "a" / "DeutschJozsa_2Q_baseline_schedule.csv"));
  CHECK(fs::exists(dir / "a" / "DeutschJozsa_2Q_summary.json"));

  // Same config and seed, different worker count: byte-identical log.
  ExperimentConfig again = small_config(dir / "b");
  again.workers = 4;
  again.run_baseline = false;
  const ExperimentResult r2 = run_experiment(again);
  CHECK(slurp(r.log_path) == slurp(r2.log_path));
  CHECK(r2.baseline_fidelity == r.baseline_fidelity);
  CHECK_FALSE(fs::exists(dir / "b" / "DeutschJozsa_2Q_baseline_schedule.csv"));
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch("cli");
  CHECK(run_cli("circuit --algorithm grover --qubits 3") == 0);
  CHECK(run_cli("circuit --qubits 9") == 1);
  CHECK(run_cli("run --qubits 9 --output-dir " + dir.string()) == 1);
  CHECK(run_cli("run --algorithm shor") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("plot --log " + (dir / "missing.csv").string() + " --output " +
                (dir / "p.csv").string()) == 2);
  std::ofstream(dir / "file") << "x";
  CHECK(run_cli("run --qubits 2 --population 4 --generations 1 --output-dir " +
                (dir / "file" / "x").string()) == 2);
  CHECK(run_cli("run --qubits 2 --population 4 --generations 1 --seed 3 --output-dir " +
                (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "DeutschJozsa_2Q_With_Opt_log.csv"));
}
