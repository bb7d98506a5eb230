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

#include "pulsega/ga.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pulsega/errors.hpp"
#include "pulsega/thread_pool.hpp"

namespace pulsega {

namespace {

enum Purpose : std::uint64_t {
  kInitPopulation = 1,
  kIndividualSeed = 2,
  kGeneration = 3,
  kDiversity = 4,
  kChildSeed = 5,
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double fitness_of(const Individual& ind) {
  if (!ind.fitness) throw ContractError("individual has not been evaluated");
  return *ind.fitness;
}

Gene clamp_gene(Gene g, const GenomeBounds& b) {
  g.evo_time = std::clamp(g.evo_time, b.evo_min, b.evo_max);
  g.num_tslots = std::clamp(g.num_tslots, b.slot_min, b.slot_max);
  return g;
}

}  // namespace

std::string to_string(DiversityAction action) {
  return action == DiversityAction::Mutate ? "mutate" : "replace";
}

DiversityAction parse_diversity_action(const std::string& text) {
  if (text == "mutate") return DiversityAction::Mutate;
  if (text == "replace") return DiversityAction::Replace;
  throw ArgumentError("diversity action must be 'mutate' or 'replace', got '" + text + "'");
}

void GAConfig::validate() const {
  auto fail = [](const std::string& m) { throw ArgumentError("GA config: " + m); };
  if (population_size < 2) fail("population_size must be at least 2");
  if (generations < 0) fail("generations must be non-negative");
  if (!(p_mut > 0.0 && p_mut < 1.0)) fail("p_mut must lie in (0, 1)");
  if (!(p_cross > 0.0 && p_cross < 1.0)) fail("p_cross must lie in (0, 1)");
  if (!std::isfinite(delta)) fail("delta must be finite");
  if (interval < 1) fail("interval must be at least 1");
  if (!(delta_p >= 0.0)) fail("delta_p must be non-negative");
  if (early_stop_rounds < 1) fail("early_stop_rounds must be at least 1");
  if (!(epsilon >= 0.0)) fail("epsilon must be non-negative");
  if (!(diversity_threshold >= 0.0)) fail("diversity_threshold must be non-negative");
  if (tournament_size < 1 || static_cast<std::size_t>(tournament_size) > population_size) {
    fail("tournament_size must lie in [1, population_size]");
  }
  if (elite_count < 0 || static_cast<std::size_t>(elite_count) >= population_size) {
    fail("elite_count must lie in [0, population_size)");
  }
  if (!(sigma_scale >= 0.0)) fail("sigma_scale must be non-negative");
  if (!(replace_fraction >= 0.0 && replace_fraction <= 1.0)) fail("replace_fraction must lie in [0, 1]");
  if (!(bounds.evo_min > 0.0) || !(bounds.evo_min <= bounds.evo_max) ||
      !std::isfinite(bounds.evo_max)) {
    fail("evo_time bounds must satisfy 0 < evo_min <= evo_max");
  }
  if (bounds.slot_min < 1 || bounds.slot_min > bounds.slot_max) {
    fail("num_tslots bounds must satisfy 1 <= slot_min <= slot_max");
  }
}

Rng make_stream(std::uint64_t master_seed, std::uint64_t purpose, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t purpose, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed ^ splitmix64(purpose)) ^ index);
}

Individual random_individual(const GenomeBounds& bounds, std::size_t genome_length, Rng& rng) {
  std::uniform_real_distribution<double> evo(bounds.evo_min, bounds.evo_max);
  std::uniform_int_distribution<int> slots(bounds.slot_min, bounds.slot_max);
  Individual ind;
  ind.genes.reserve(genome_length);
  for (std::size_t g = 0; g < genome_length; ++g) {
    Gene gene;
    gene.evo_time = bounds.evo_min == bounds.evo_max ? bounds.evo_min : evo(rng);
    gene.num_tslots = slots(rng);
    ind.genes.push_back(gene);
  }
  return ind;
}

std::vector<Individual> initialize_population(const GAConfig& cfg, std::size_t genome_length) {
  cfg.validate();
  Rng rng = make_stream(cfg.master_seed, kInitPopulation, 0);
  std::vector<Individual> pop;
  pop.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    Individual ind = random_individual(cfg.bounds, genome_length, rng);
    ind.seed = derive_seed(cfg.master_seed, kIndividualSeed, i);
    pop.push_back(std::move(ind));
  }
  return pop;
}

const Individual& tournament_select(std::span<const Individual> pop, int k, Rng& rng) {
  if (pop.empty()) throw ArgumentError("tournament_select: empty population");
  if (k < 1 || static_cast<std::size_t>(k) > pop.size()) {
    throw ArgumentError("tournament_select: k must lie in [1, N]");
  }
  for (const auto& ind : pop) fitness_of(ind);
  // Partial Fisher-Yates draws k distinct members.
  std::vector<std::size_t> idx(pop.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::size_t best = pop.size();
  for (int t = 0; t < k; ++t) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(t), idx.size() - 1);
    std::swap(idx[static_cast<std::size_t>(t)], idx[pick(rng)]);
    const std::size_t c = idx[static_cast<std::size_t>(t)];
    if (best == pop.size() || *pop[c].fitness > *pop[best].fitness ||
        (*pop[c].fitness == *pop[best].fitness && c < best)) {
      best = c;
    }
  }
  return pop[best];
}

std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            double p_cross, Rng& rng) {
  if (p1.genes.size() != p2.genes.size()) throw ArgumentError("crossover: genome lengths differ");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Individual c1 = p1;
  Individual c2 = p2;
  if (coin(rng) < p_cross) {
    for (std::size_t i = 0; i < c1.genes.size(); ++i) {
      if (coin(rng) < 0.5) std::swap(c1.genes[i], c2.genes[i]);
    }
    c1.fitness.reset();
    c2.fitness.reset();
    c1.failed = false;
    c2.failed = false;
  }
  return {std::move(c1), std::move(c2)};
}

Individual mutate(const Individual& ind, double p_mut, double sigma_scale,
                  const GenomeBounds& bounds, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> step_index(0, 3);
  constexpr int kSteps[] = {-2, -1, 1, 2};
  const double sigma = sigma_scale * (bounds.evo_max - bounds.evo_min);
  Individual out = ind;
  bool changed = false;
  for (auto& g : out.genes) {
    if (!(coin(rng) < p_mut)) continue;
    const Gene before = g;
    g.evo_time += sigma * normal(rng);
    g.num_tslots += kSteps[step_index(rng)];
    g = clamp_gene(g, bounds);
    changed = changed || !(g == before);
  }
  if (changed) {
    out.fitness.reset();
    out.failed = false;
  }
  return out;
}

std::vector<std::size_t> elite_indices(std::span<const Individual> pop, std::size_t count) {
  std::vector<std::size_t> idx(pop.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (const auto& ind : pop) fitness_of(ind);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return *pop[a].fitness > *pop[b].fitness; });
  idx.resize(std::min(count, idx.size()));
  return idx;
}

std::vector<Individual> apply_elitism(std::span<const Individual> pop, int elite_count) {
  if (elite_count < 0) throw ArgumentError("elite_count must be non-negative");
  std::vector<Individual> out;
  for (std::size_t i : elite_indices(pop, static_cast<std::size_t>(elite_count))) {
    out.push_back(pop[i]);
  }
  return out;
}

std::vector<Individual> replace_population(std::vector<Individual> offspring,
                                           std::span<const Individual> elites) {
  if (elites.size() > offspring.size()) {
    throw ArgumentError("replace_population: more elites than offspring");
  }
  if (elites.empty()) return offspring;
  // Worst offspring first; ties replace the later index.
  std::vector<std::size_t> idx(offspring.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (const auto& ind : offspring) fitness_of(ind);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (*offspring[a].fitness != *offspring[b].fitness) {
      return *offspring[a].fitness < *offspring[b].fitness;
    }
    return a > b;
  });
  for (std::size_t e = 0; e < elites.size(); ++e) offspring[idx[e]] = elites[e];
  return offspring;
}

std::vector<double> flatten(const Individual& ind) {
  std::vector<double> x;
  x.reserve(2 * ind.genes.size());
  for (const auto& g : ind.genes) {
    x.push_back(g.evo_time);
    x.push_back(static_cast<double>(g.num_tslots));
  }
  return x;
}

double population_diversity(std::span<const Individual> pop) {
  const std::size_t n = pop.size();
  if (n < 2) throw ArgumentError("population_diversity needs at least 2 individuals");
  const std::size_t dim = 2 * pop.front().genes.size();
  if (dim == 0) return 0.0;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    if (2 * pop[i].genes.size() != dim) throw ArgumentError("population_diversity: genome lengths differ");
    const auto x = flatten(pop[i]);
    for (std::size_t j = 0; j < dim; ++j) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[j];
  }
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  cov.diagonal().array() += 1e-6;
  // With cov = L L^T, (a-b)^T cov^-1 (a-b) = |L^-1 a - L^-1 b|^2.
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::MatrixXd W = llt.matrixL().solve(X.transpose());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < W.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < W.cols(); ++j) sum += (W.col(i) - W.col(j)).norm();
  }
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<std::size_t> control_diversity(std::vector<Individual>& pop, double diversity,
                                           const GAConfig& cfg, Rng& rng) {
  std::vector<std::size_t> touched;
  if (diversity >= cfg.diversity_threshold) return touched;
  const auto elites = elite_indices(pop, static_cast<std::size_t>(cfg.elite_count));
  auto is_elite = [&](std::size_t i) {
    return std::find(elites.begin(), elites.end(), i) != elites.end();
  };
  if (cfg.diversity_action == DiversityAction::Mutate) {
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (is_elite(i)) continue;
      pop[i] = mutate(pop[i], 1.0, 2.0 * cfg.sigma_scale, cfg.bounds, rng);
      if (!pop[i].fitness) touched.push_back(i);
    }
  } else {
    const auto count = static_cast<std::size_t>(
        std::floor(static_cast<double>(pop.size()) * cfg.replace_fraction + 1e-9));
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return *pop[a].fitness < *pop[b].fitness;
    });
    for (std::size_t i : order) {
      if (touched.size() == count) break;
      if (is_elite(i)) continue;
      Individual fresh = random_individual(cfg.bounds, pop[i].genes.size(), rng);
      fresh.seed = pop[i].seed;
      pop[i] = std::move(fresh);
      touched.push_back(i);
    }
    std::sort(touched.begin(), touched.end());
  }
  return touched;
}

std::pair<double, double> adjust_probabilities(std::span<const GenerationStats> history,
                                               const GAConfig& cfg, double p_mut,
                                               double p_cross) {
  const auto interval = static_cast<std::size_t>(cfg.interval);
  if (cfg.interval < 1 || history.size() < interval + 1) {
    throw ArgumentError("adjust_probabilities needs interval + 1 generations of history");
  }
  const double change = history.back().avg - history[history.size() - 1 - interval].avg;
  const double step = change < cfg.delta ? cfg.delta_p : -cfg.delta_p;
  return {std::clamp(p_mut + step, kPMutMin, kPMutMax),
          std::clamp(p_cross + step, kPCrossMin, kPCrossMax)};
}

bool should_stop_early(std::span<const double> best_history, int rounds, double epsilon) {
  if (best_history.empty()) throw ArgumentError("should_stop_early: empty history");
  if (rounds < 1) throw ArgumentError("should_stop_early: rounds must be positive");
  const std::size_t g = best_history.size() - 1;
  const auto r = static_cast<std::size_t>(rounds);
  if (g < r) return false;
  return best_history[g] - best_history[g - r] < epsilon;
}

GenerationStats summarize(int gen, std::size_t nevals, std::span<const Individual> pop,
                          double diversity, double p_mut, double p_cross) {
  if (pop.empty()) throw ArgumentError("summarize: empty population");
  GenerationStats s;
  s.gen = gen;
  s.nevals = nevals;
  double sum = 0.0;
  s.min = fitness_of(pop.front());
  s.max = s.min;
  for (const auto& ind : pop) {
    const double f = fitness_of(ind);
    sum += f;
    s.min = std::min(s.min, f);
    s.max = std::max(s.max, f);
  }
  const double n = static_cast<double>(pop.size());
  s.avg = std::clamp(sum / n, s.min, s.max);
  double var = 0.0;
  for (const auto& ind : pop) var += (*ind.fitness - s.avg) * (*ind.fitness - s.avg);
  s.std = std::sqrt(var / n);
  s.diversity = diversity;
  s.p_mut = p_mut;
  s.p_cross = p_cross;
  return s;
}

// ---------------------------------------------------------------------------

QuantumFitness::QuantumFitness(Circuit circuit, NoiseParams noise, std::uint64_t compile_seed,
                               SolverOptions solver)
    : circuit_(std::move(circuit)),
      proc_(build_spin_chain_processor(circuit_.n_qubits)),
      noise_(noise),
      compile_seed_(compile_seed),
      solver_(solver),
      target_(DensityMatrix::from_pure(ideal_output_state(circuit_))),
      initial_(DensityMatrix::from_pure(PureState::basis(proc_.dim(), 0))) {
  noise_.validate();
  solver_.validate();
}

PulseSchedule QuantumFitness::schedule(std::span<const Gene> genes) const {
  if (genes.size() != circuit_.gates.size()) {
    throw ArgumentError("genome length does not match the circuit");
  }
  return schedule_for_circuit(circuit_.gates, proc_, genes, compile_cache_, compile_seed_);
}

DensityMatrix QuantumFitness::final_state(std::span<const Gene> genes) const {
  const PulseSchedule sched = schedule(genes);
  std::vector<CollapseOperator> collapse;
  if (!sched.empty()) collapse = build_collapse_operators(noise_, proc_.n_qubits, sched.total_time());
  return propagate(initial_, sched, proc_, collapse, solver_, &exp_cache_);
}

EvaluationResult QuantumFitness::evaluate(std::span<const Gene> genes) const {
  try {
    return {state_fidelity(final_state(genes), target_), false, {}};
  } catch (const NumericalInstabilityError& e) {
    return {0.0, true, e.what()};
  } catch (const ValidationError& e) {
    return {0.0, true, e.what()};
  }
}

// ---------------------------------------------------------------------------

RunResult run(const GAConfig& cfg, std::size_t genome_length, const Evaluator& evaluate,
              std::size_t workers, const GenerationCallback& on_generation) {
  cfg.validate();
  if (!evaluate) throw ArgumentError("run: no evaluator");
  if (workers < 1) throw ArgumentError("run: workers must be at least 1");
  ThreadPool pool(workers);

  auto evaluate_pending = [&](std::vector<Individual>& pop) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (!pop[i].fitness) pending.push_back(i);
    }
    std::vector<EvaluationResult> results(pending.size());
    pool.parallel_for(pending.size(), [&](std::size_t k) {
      EvaluationResult r = evaluate(pop[pending[k]]);
      if (!std::isfinite(r.fitness)) r = {0.0, true, "non-finite fitness"};
      r.fitness = std::clamp(r.fitness, 0.0, 1.0);
      results[k] = std::move(r);
    });
    for (std::size_t k = 0; k < pending.size(); ++k) {
      pop[pending[k]].fitness = results[k].fitness;
      pop[pending[k]].failed = results[k].failed;
    }
    return pending.size();
  };

  RunResult result;
  double p_mut = cfg.p_mut;
  double p_cross = cfg.p_cross;
  std::vector<double> best_history;

  auto track_best = [&](std::span<const Individual> pop, int gen) {
    const auto top = elite_indices(pop, 1).front();
    if (!result.best.fitness || *pop[top].fitness > *result.best.fitness) {
      result.best = pop[top];
      result.best_generation = gen;
    }
    best_history.push_back(*result.best.fitness);
  };

  std::vector<Individual> pop = initialize_population(cfg, genome_length);
  std::size_t nevals = evaluate_pending(pop);
  track_best(pop, 0);
  result.log.push_back(summarize(0, nevals, pop, population_diversity(pop), p_mut, p_cross));
  if (on_generation) on_generation(result.log.back(), pop);

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    Rng rng = make_stream(cfg.master_seed, kGeneration, static_cast<std::uint64_t>(gen));
    const std::vector<Individual> elites = apply_elitism(pop, cfg.elite_count);

    std::vector<Individual> offspring;
    offspring.reserve(cfg.population_size + 1);
    while (offspring.size() < cfg.population_size) {
      const Individual& a = tournament_select(pop, cfg.tournament_size, rng);
      const Individual& b = tournament_select(pop, cfg.tournament_size, rng);
      auto [c1, c2] = crossover(a, b, p_cross, rng);
      offspring.push_back(mutate(c1, p_mut, cfg.sigma_scale, cfg.bounds, rng));
      offspring.push_back(mutate(c2, p_mut, cfg.sigma_scale, cfg.bounds, rng));
    }
    offspring.resize(cfg.population_size);
    for (std::size_t i = 0; i < offspring.size(); ++i) {
      if (!offspring[i].fitness) {
        offspring[i].seed = derive_seed(cfg.master_seed, kChildSeed,
                                        static_cast<std::uint64_t>(gen) * cfg.population_size + i);
      }
    }
    nevals = evaluate_pending(offspring);
    pop = replace_population(std::move(offspring), elites);

    double diversity = population_diversity(pop);
    if (diversity < cfg.diversity_threshold) {
      Rng drng = make_stream(cfg.master_seed, kDiversity, static_cast<std::uint64_t>(gen));
      const auto touched = control_diversity(pop, diversity, cfg, drng);
      for (std::size_t i : touched) pop[i].fitness.reset();
      nevals += evaluate_pending(pop);
      diversity = population_diversity(pop);
    }

    track_best(pop, gen);
    result.log.push_back(summarize(gen, nevals, pop, diversity, p_mut, p_cross));
    if (on_generation) on_generation(result.log.back(), pop);

    if (gen % cfg.interval == 0) {
      std::tie(p_mut, p_cross) = adjust_probabilities(result.log, cfg, p_mut, p_cross);
    }
    if (should_stop_early(best_history, cfg.early_stop_rounds, cfg.epsilon)) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace pulsega
