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
 * Adaptive genetic algorithm over per-gate pulse parameters.
 *
 * A genome holds one (evo_time, num_tslots) gene per circuit gate. Each
 * generation selects parents by tournament, applies uniform crossover and
 * mutation, evaluates the offspring in parallel, restores the elites and
 * then checks population diversity. Every `interval` generations both
 * operator probabilities move by delta_p depending on how much the average
 * fitness improved.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pulsega/circuits.hpp"
#include "pulsega/evolve.hpp"
#include "pulsega/noise.hpp"
#include "pulsega/pulse.hpp"

namespace pulsega {

struct GenomeBounds {
  double evo_min = 0.5;
  double evo_max = 5.0;
  int slot_min = 2;
  int slot_max = 30;
  bool operator==(const GenomeBounds&) const = default;
};

enum class DiversityAction { Mutate, Replace };

std::string to_string(DiversityAction action);
/// Accepts "mutate" or "replace".
DiversityAction parse_diversity_action(const std::string& text);

struct GAConfig {
  std::size_t population_size = 50;
  int generations = 30;
  double p_mut = 0.2;
  double p_cross = 0.7;
  double delta = 0.001;
  int interval = 5;
  double delta_p = 0.01;
  int early_stop_rounds = 20;
  double epsilon = 1e-4;
  double diversity_threshold = 0.5;
  DiversityAction diversity_action = DiversityAction::Mutate;
  int tournament_size = 3;
  int elite_count = 1;
  double sigma_scale = 0.1;
  double replace_fraction = 0.2;
  GenomeBounds bounds;
  std::uint64_t master_seed = 0;

  /// Throws ArgumentError on any violated constraint.
  void validate() const;
  bool operator==(const GAConfig&) const = default;
};

inline constexpr double kPMutMin = 0.01;
inline constexpr double kPMutMax = 0.5;
inline constexpr double kPCrossMin = 0.3;
inline constexpr double kPCrossMax = 0.95;

struct Individual {
  std::vector<Gene> genes;
  std::optional<double> fitness;
  std::uint64_t seed = 0;
  bool failed = false;  // evaluation hit a numerical failure and scored 0
};

struct GenerationStats {
  int gen = 0;
  std::size_t nevals = 0;
  double avg = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  double diversity = 0.0;
  double p_mut = 0.0;
  double p_cross = 0.0;
};

using Rng = std::mt19937_64;

/// Independent stream for (purpose, index) under one master seed.
Rng make_stream(std::uint64_t master_seed, std::uint64_t purpose, std::uint64_t index);
/// Deterministic 64-bit seed for (purpose, index) under one master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t purpose, std::uint64_t index);

Individual random_individual(const GenomeBounds& bounds, std::size_t genome_length, Rng& rng);
std::vector<Individual> initialize_population(const GAConfig& cfg, std::size_t genome_length);

/// Best of k distinct members drawn uniformly; ties go to the lower index.
const Individual& tournament_select(std::span<const Individual> pop, int k, Rng& rng);

std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            double p_cross, Rng& rng);

Individual mutate(const Individual& ind, double p_mut, double sigma_scale,
                  const GenomeBounds& bounds, Rng& rng);

/// Indices of the `count` fittest members, best first; ties keep index order.
std::vector<std::size_t> elite_indices(std::span<const Individual> pop, std::size_t count);

/// Copies of the top elite_count members of `pop`.
std::vector<Individual> apply_elitism(std::span<const Individual> pop, int elite_count);

/// The offspring become the population, except that the worst
/// |elites| offspring are overwritten by the elites.
std::vector<Individual> replace_population(std::vector<Individual> offspring,
                                           std::span<const Individual> elites);

/// Genome as [evo_0, slots_0, evo_1, slots_1, ...].
std::vector<double> flatten(const Individual& ind);

/// Mean pairwise Mahalanobis distance under the population covariance
/// (normalized by N) regularized with 1e-6 I.
double population_diversity(std::span<const Individual> pop);

/// Applies the diversity action when diversity < threshold and returns the
/// indices whose fitness was cleared. Elites are never touched.
std::vector<std::size_t> control_diversity(std::vector<Individual>& pop, double diversity,
                                           const GAConfig& cfg, Rng& rng);

/// One application of the adjustment rule using the last entry of
/// `history` against the entry `interval` generations earlier. Requires at
/// least interval + 1 entries.
std::pair<double, double> adjust_probabilities(std::span<const GenerationStats> history,
                                               const GAConfig& cfg, double p_mut,
                                               double p_cross);

/// best_history[g] is the best-ever fitness after generation g.
bool should_stop_early(std::span<const double> best_history, int rounds, double epsilon);

GenerationStats summarize(int gen, std::size_t nevals, std::span<const Individual> pop,
                          double diversity, double p_mut, double p_cross);

struct EvaluationResult {
  double fitness = 0.0;
  bool failed = false;
  std::string diagnostic;
};

/// Must be safe to call concurrently.
using Evaluator = std::function<EvaluationResult(const Individual&)>;

/// Noisy pulse-level fidelity of a circuit for a genome.
class QuantumFitness {
 public:
  QuantumFitness(Circuit circuit, NoiseParams noise, std::uint64_t compile_seed,
                 SolverOptions solver = {});

  const Circuit& circuit() const noexcept { return circuit_; }
  const Processor& processor() const noexcept { return proc_; }
  const NoiseParams& noise() const noexcept { return noise_; }
  const DensityMatrix& target() const noexcept { return target_; }
  std::uint64_t compile_seed() const noexcept { return compile_seed_; }
  CompilationCache& compile_cache() const noexcept { return compile_cache_; }
  ExponentialCache& exponential_cache() const noexcept { return exp_cache_; }

  PulseSchedule schedule(std::span<const Gene> genes) const;
  DensityMatrix final_state(std::span<const Gene> genes) const;

  /// Fidelity of the final state to the ideal output. Numerical failures
  /// score 0 with failed set.
  EvaluationResult evaluate(std::span<const Gene> genes) const;
  EvaluationResult operator()(const Individual& ind) const { return evaluate(ind.genes); }

 private:
  Circuit circuit_;
  Processor proc_;
  NoiseParams noise_;
  std::uint64_t compile_seed_;
  SolverOptions solver_;
  DensityMatrix target_;
  DensityMatrix initial_;
  mutable CompilationCache compile_cache_;
  mutable ExponentialCache exp_cache_;
};

struct RunResult {
  Individual best;
  int best_generation = 0;
  std::vector<GenerationStats> log;
  bool stopped_early = false;
};

/// Called after each generation's statistics are final.
using GenerationCallback =
    std::function<void(const GenerationStats&, std::span<const Individual>)>;

/// The full loop. Results do not depend on `workers`.
RunResult run(const GAConfig& cfg, std::size_t genome_length, const Evaluator& evaluate,
              std::size_t workers = 1, const GenerationCallback& on_generation = {});

}  // namespace pulsega
