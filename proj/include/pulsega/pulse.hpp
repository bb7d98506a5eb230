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
 * Spin-chain processor model and gate-to-pulse compilation.
 *
 * A gate is realized by piecewise-constant control amplitudes u_j over
 * num_tslots equal slices of a total evo_time, under
 * H(t) = H_drift + sum_j u_j(t) H_j. Amplitudes are found by gradient
 * ascent on the phase-insensitive gate fidelity |Tr(U_target^dag U)|^2 / d^2.
 */

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pulsega/qmath.hpp"

namespace pulsega {

struct Processor {
  std::size_t n_qubits = 0;
  ComplexMatrix drift;
  std::vector<ComplexMatrix> controls;
  std::vector<std::string> control_labels;
  double u_max = 0.0;

  std::size_t dim() const noexcept { return std::size_t{1} << n_qubits; }
  std::size_t n_controls() const noexcept { return controls.size(); }
};

/// Drift-free chain: sigma_x and sigma_z on every qubit (ordered
/// sx0, sz0, sx1, sz1, ...) followed by sigma_x sigma_x + sigma_y sigma_y on
/// each neighbouring pair. u_max = 2 pi. Requires 1 <= n_qubits <= 6.
Processor build_spin_chain_processor(std::size_t n_qubits);

/// Global indices of the controls supported on qubits [first, last] of a
/// chain processor, in the order build_spin_chain_processor(last-first+1)
/// lists them.
std::vector<std::size_t> chain_controls_on_path(std::size_t n_qubits, std::size_t first,
                                                std::size_t last);

struct GateSpec {
  std::string name;
  ComplexMatrix target_unitary;  // on acting_qubits, first qubit most significant
  std::vector<std::size_t> acting_qubits;
};

namespace gates {
GateSpec identity(std::size_t q);
GateSpec x(std::size_t q);
GateSpec y(std::size_t q);
GateSpec z(std::size_t q);
GateSpec h(std::size_t q);
GateSpec cnot(std::size_t control, std::size_t target);
GateSpec cz(std::size_t a, std::size_t b);
}  // namespace gates

/// Checks the unitary is square, sized for its qubits and unitary to 1e-10.
void validate_gate(const GateSpec& gate, std::size_t n_qubits);

struct PulseSlice {
  double duration = 0.0;
  std::vector<double> amplitudes;  // one per processor control
  std::size_t gate_index = 0;
  std::size_t slice_index = 0;
};

class PulseSchedule {
 public:
  const std::vector<PulseSlice>& slices() const noexcept { return slices_; }
  bool empty() const noexcept { return slices_.empty(); }
  std::size_t size() const noexcept { return slices_.size(); }
  double total_time() const noexcept { return total_time_; }

  void push_back(PulseSlice slice);
  /// Append every slice of `other`, relabelled with `gate_index`.
  void append(const PulseSchedule& other, std::size_t gate_index);

 private:
  std::vector<PulseSlice> slices_;
  double total_time_ = 0.0;
};

/// The per-gate genome entry.
struct Gene {
  double evo_time = 1.0;
  int num_tslots = 10;
  bool operator==(const Gene&) const = default;
};

struct GrapeOptions {
  int max_iterations = 1000;
  double learning_rate = 0.1;
  double min_improvement = 1e-9;
  double init_fraction = 0.1;  // initial |u| <= init_fraction * u_max
  int max_restarts = 4;
  double restart_threshold = 0.999;  // restart while the best fidelity is below this
};

struct GrapeResult {
  PulseSchedule schedule;  // gate_index 0, amplitudes over all processor controls
  double gate_fidelity = 0.0;
  int iterations = 0;
};

/// Fidelity of U_N ... U_1 against `target`, U_k = exp(-i dt sum_j u[k m + j]
/// controls[j]), with m = controls.size(). Fills `gradient` with the exact
/// derivative in the same layout when it is non-null.
double grape_objective(std::span<const ComplexMatrix> controls, const ComplexMatrix& target,
                       double dt, std::span<const double> u, std::vector<double>* gradient);

/// Compiles `gate` on the chain segment spanning its acting qubits.
/// Deterministic for a given seed.
GrapeResult grape_compile(const GateSpec& gate, const Processor& proc, double evo_time,
                          int num_tslots, std::uint64_t seed,
                          const GrapeOptions& options = {});

/// H_drift + sum_j u_j H_j over the full register.
ComplexMatrix slice_hamiltonian(const Processor& proc, std::span<const double> amplitudes);

/// Ordered product of exp(-i dt H(slice)) over the schedule, computed with
/// the general matrix exponential.
ComplexMatrix schedule_propagator(const PulseSchedule& schedule, const Processor& proc);

/// |Tr(target^dag actual)|^2 / d^2
double gate_fidelity(const ComplexMatrix& target, const ComplexMatrix& actual);

/// Shared cache of compiled gates keyed by (gate, qubits, evo_time,
/// num_tslots, seed). Safe for concurrent use; racing compiles of one key
/// produce identical results and the last write wins.
class CompilationCache {
 public:
  std::shared_ptr<const GrapeResult> get_or_compile(const GateSpec& gate,
                                                    const Processor& proc,
                                                    const Gene& gene, std::uint64_t seed);

  std::size_t compile_count() const;
  std::size_t size() const;
  void clear();

  GrapeOptions options;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const GrapeResult>> entries_;
  std::size_t compiles_ = 0;
};

/// Concatenates the compiled pulses of every gate in circuit order.
PulseSchedule schedule_for_circuit(std::span<const GateSpec> circuit, const Processor& proc,
                                   std::span<const Gene> genome, CompilationCache& cache,
                                   std::uint64_t seed);

/// Default genome entry: (1.0, 10) for one-qubit gates, (3.0, 12) otherwise.
Gene baseline_gene(const GateSpec& gate);

/// `gate_index,slice_index,duration,u_0,...,u_{m-1}` with a header row.
void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule,
                        std::size_t n_controls);
void write_schedule_csv(const std::string& path, const PulseSchedule& schedule,
                        std::size_t n_controls);
/// Inverse of write_schedule_csv. Throws ParseError on malformed input.
PulseSchedule read_schedule_csv(const std::string& path);

}  // namespace pulsega
