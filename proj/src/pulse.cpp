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

#include "pulsega/pulse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "pulsega/errors.hpp"

namespace pulsega {

// ---------------------------------------------------------------------------
// Processor

Processor build_spin_chain_processor(std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > 6) {
    throw ArgumentError("build_spin_chain_processor: n_qubits must be in [1, 6]");
  }
  Processor proc;
  proc.n_qubits = n_qubits;
  proc.drift = ComplexMatrix::zeros(proc.dim());
  proc.u_max = 2.0 * std::numbers::pi;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    const std::size_t qs[] = {q};
    proc.controls.push_back(embed_operator(pauli_x(), qs, n_qubits));
    proc.control_labels.push_back("sx" + std::to_string(q));
    proc.controls.push_back(embed_operator(pauli_z(), qs, n_qubits));
    proc.control_labels.push_back("sz" + std::to_string(q));
  }
  const ComplexMatrix xy = tensor_product({pauli_x(), pauli_x()}) +
                           tensor_product({pauli_y(), pauli_y()});
  for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
    const std::size_t qs[] = {q, q + 1};
    proc.controls.push_back(embed_operator(xy, qs, n_qubits));
    proc.control_labels.push_back("xy" + std::to_string(q) + std::to_string(q + 1));
  }
  return proc;
}

std::vector<std::size_t> chain_controls_on_path(std::size_t n_qubits, std::size_t first,
                                                std::size_t last) {
  if (first > last || last >= n_qubits) {
    throw ArgumentError("chain_controls_on_path: invalid qubit range");
  }
  std::vector<std::size_t> out;
  for (std::size_t q = first; q <= last; ++q) {
    out.push_back(2 * q);
    out.push_back(2 * q + 1);
  }
  for (std::size_t q = first; q < last; ++q) out.push_back(2 * n_qubits + q);
  return out;
}

namespace {

bool is_chain_layout(const Processor& proc) {
  if (proc.drift.max_abs() != 0.0) return false;
  const std::size_t n = proc.n_qubits;
  if (proc.control_labels.size() != 3 * n - 1) return false;
  for (std::size_t q = 0; q < n; ++q) {
    if (proc.control_labels[2 * q] != "sx" + std::to_string(q)) return false;
    if (proc.control_labels[2 * q + 1] != "sz" + std::to_string(q)) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gates

namespace gates {

namespace {
GateSpec single(std::string name, ComplexMatrix u, std::size_t q) {
  return GateSpec{std::move(name), std::move(u), {q}};
}
}  // namespace

GateSpec identity(std::size_t q) { return single("I", ComplexMatrix::identity(2), q); }
GateSpec x(std::size_t q) { return single("X", pauli_x(), q); }
GateSpec y(std::size_t q) { return single("Y", pauli_y(), q); }
GateSpec z(std::size_t q) { return single("Z", pauli_z(), q); }

GateSpec h(std::size_t q) {
  const double s = 1.0 / std::numbers::sqrt2;
  return single("H", ComplexMatrix{{s, s}, {s, -s}}, q);
}

GateSpec cnot(std::size_t control, std::size_t target) {
  if (control == target) throw ArgumentError("cnot: control equals target");
  return GateSpec{"CNOT",
                  ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}},
                  {control, target}};
}

GateSpec cz(std::size_t a, std::size_t b) {
  if (a == b) throw ArgumentError("cz: repeated qubit");
  return GateSpec{"CZ",
                  ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}},
                  {a, b}};
}

}  // namespace gates

void validate_gate(const GateSpec& gate, std::size_t n_qubits) {
  const std::size_t k = gate.acting_qubits.size();
  if (k == 0) throw ArgumentError("gate " + gate.name + " acts on no qubits");
  for (std::size_t q : gate.acting_qubits) {
    if (q >= n_qubits) throw ArgumentError("gate " + gate.name + ": qubit out of range");
  }
  const auto& u = gate.target_unitary;
  if (!u.is_square() || u.rows() != (std::size_t{1} << k)) {
    throw ArgumentError("gate " + gate.name + ": unitary size does not match qubits");
  }
  if (max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows())) > 1e-10) {
    throw ArgumentError("gate " + gate.name + ": target is not unitary");
  }
}

// ---------------------------------------------------------------------------
// Schedules

void PulseSchedule::push_back(PulseSlice slice) {
  if (!(slice.duration > 0.0)) throw ArgumentError("pulse slice duration must be positive");
  total_time_ += slice.duration;
  slices_.push_back(std::move(slice));
}

void PulseSchedule::append(const PulseSchedule& other, std::size_t gate_index) {
  for (PulseSlice s : other.slices_) {
    s.gate_index = gate_index;
    push_back(std::move(s));
  }
}

ComplexMatrix slice_hamiltonian(const Processor& proc, std::span<const double> amplitudes) {
  if (amplitudes.size() != proc.n_controls()) {
    throw ArgumentError("slice_hamiltonian: amplitude count does not match controls");
  }
  ComplexMatrix h = proc.drift;
  for (std::size_t j = 0; j < amplitudes.size(); ++j) {
    if (amplitudes[j] != 0.0) h.add_scaled(amplitudes[j], proc.controls[j]);
  }
  return h;
}

ComplexMatrix schedule_propagator(const PulseSchedule& schedule, const Processor& proc) {
  ComplexMatrix u = ComplexMatrix::identity(proc.dim());
  for (const auto& s : schedule.slices()) {
    ComplexMatrix gen = slice_hamiltonian(proc, s.amplitudes);
    gen *= cplx{0.0, -s.duration};
    u = matrix_exponential(gen) * u;
  }
  return u;
}

double gate_fidelity(const ComplexMatrix& target, const ComplexMatrix& actual) {
  if (target.rows() != actual.rows() || target.cols() != actual.cols() ||
      !target.is_square()) {
    throw ArgumentError("gate_fidelity: dimension mismatch");
  }
  cplx overlap{};
  for (std::size_t r = 0; r < target.rows(); ++r)
    for (std::size_t c = 0; c < target.cols(); ++c)
      overlap += std::conj(target(r, c)) * actual(r, c);
  const double d = static_cast<double>(target.rows());
  return std::norm(overlap) / (d * d);
}

// ---------------------------------------------------------------------------
// GRAPE

namespace {

// Gradient ascent over slice amplitudes on a (possibly reduced) register.
class GrapeProblem {
 public:
  GrapeProblem(std::vector<ComplexMatrix> controls, ComplexMatrix target, double dt,
               std::size_t slots, double u_max)
      : controls_(std::move(controls)),
        target_adj_(target.adjoint()),
        dt_(dt),
        slots_(slots),
        u_max_(u_max),
        dim_(target.rows()) {}

  std::size_t n_params() const { return slots_ * controls_.size(); }

  double fidelity(const std::vector<double>& u) const {
    ComplexMatrix prod = ComplexMatrix::identity(dim_);
    for (std::size_t k = 0; k < slots_; ++k) prod = propagator(slot_eigen(u, k)) * prod;
    return overlap_fidelity(prod);
  }

  // Returns the fidelity; fills `grad` with its exact derivative.
  double fidelity_and_gradient(const std::vector<double>& u, std::vector<double>& grad) const {
    const std::size_t m = controls_.size();
    std::vector<HermitianEigen> eig(slots_);
    std::vector<ComplexMatrix> props(slots_);
    for (std::size_t k = 0; k < slots_; ++k) {
      eig[k] = slot_eigen(u, k);
      props[k] = propagator(eig[k]);
    }
    // forward[k] = U_k ... U_1 (forward[0] = I)
    std::vector<ComplexMatrix> forward(slots_ + 1);
    forward[0] = ComplexMatrix::identity(dim_);
    for (std::size_t k = 0; k < slots_; ++k) forward[k + 1] = props[k] * forward[k];
    // backward[k] = T^dag U_N ... U_{k+1} (backward[N] = T^dag)
    std::vector<ComplexMatrix> backward(slots_ + 1);
    backward[slots_] = target_adj_;
    for (std::size_t k = slots_; k-- > 0;) backward[k] = backward[k + 1] * props[k];

    const cplx g = trace_product(target_adj_, forward[slots_]);
    const double d2 = static_cast<double>(dim_ * dim_);
    grad.assign(n_params(), 0.0);
    for (std::size_t k = 0; k < slots_; ++k) {
      const HermitianEigen& e = eig[k];
      const ComplexMatrix& v = e.vectors;
      const ComplexMatrix vadj = v.adjoint();
      // g = Tr(M dU) with M = forward[k] backward[k+1], moved to the eigenbasis.
      const ComplexMatrix mt = vadj * (forward[k] * backward[k + 1]) * v;
      ComplexMatrix gamma(dim_, dim_);
      for (std::size_t a = 0; a < dim_; ++a) {
        const cplx fa = std::exp(cplx{0.0, -dt_ * e.values[a]});
        for (std::size_t b = 0; b < dim_; ++b) {
          const double gap = e.values[a] - e.values[b];
          if (std::abs(gap) < 1e-9) {
            gamma(a, b) = cplx{0.0, -dt_} * fa;
          } else {
            const cplx fb = std::exp(cplx{0.0, -dt_ * e.values[b]});
            gamma(a, b) = (fa - fb) / gap;
          }
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        const ComplexMatrix hj = vadj * controls_[j] * v;
        cplx dg{};
        for (std::size_t a = 0; a < dim_; ++a)
          for (std::size_t b = 0; b < dim_; ++b) dg += mt(b, a) * hj(a, b) * gamma(a, b);
        grad[k * m + j] = 2.0 * (std::conj(g) * dg).real() / d2;
      }
    }
    return std::norm(g) / d2;
  }

  void clip(std::vector<double>& u) const {
    for (auto& v : u) v = std::clamp(v, -u_max_, u_max_);
  }

 private:
  HermitianEigen slot_eigen(const std::vector<double>& u, std::size_t k) const {
    const std::size_t m = controls_.size();
    ComplexMatrix h(dim_, dim_);
    for (std::size_t j = 0; j < m; ++j) {
      const double a = u[k * m + j];
      if (a != 0.0) h.add_scaled(a, controls_[j]);
    }
    return hermitian_eigen(h);
  }

  ComplexMatrix propagator(const HermitianEigen& e) const {
    ComplexMatrix scaled = e.vectors;
    for (std::size_t c = 0; c < dim_; ++c) {
      const cplx phase = std::exp(cplx{0.0, -dt_ * e.values[c]});
      for (std::size_t r = 0; r < dim_; ++r) scaled(r, c) *= phase;
    }
    return scaled * e.vectors.adjoint();
  }

  static cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    cplx s{};
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, i);
    return s;
  }

  double overlap_fidelity(const ComplexMatrix& prod) const {
    const double d = static_cast<double>(dim_);
    return std::norm(trace_product(target_adj_, prod)) / (d * d);
  }

  std::vector<ComplexMatrix> controls_;
  ComplexMatrix target_adj_;
  double dt_;
  std::size_t slots_;
  double u_max_;
  std::size_t dim_;
};

struct AscentOutcome {
  double fidelity;
  int iterations;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Limited-memory BFGS ascent with projection onto the amplitude box. The
// first step (and any step after a curvature reset) follows the plain
// gradient scaled by the learning rate; every step is backtracked by
// halving until the clipped move improves the fidelity.
AscentOutcome ascend(const GrapeProblem& problem, std::vector<double>& u,
                     const GrapeOptions& options) {
  constexpr std::size_t kMemory = 10;
  constexpr int kStallLimit = 5;
  int stalled = 0;
  std::vector<double> grad;
  double phi = problem.fidelity_and_gradient(u, grad);
  std::deque<std::vector<double>> s_hist;
  std::deque<std::vector<double>> y_hist;
  std::vector<double> dir(u.size());
  std::vector<double> trial(u.size());
  std::vector<double> trial_grad;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (phi >= 1.0 - 1e-15) break;

    bool quasi_newton = !s_hist.empty();
    double trial_phi = phi;
    bool accepted = false;
    for (int pass = 0; pass < 2 && !accepted; ++pass) {
      double step = 1.0;
      if (quasi_newton) {
        // Two-loop recursion on f = -phi, giving an ascent direction for phi.
        dir = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
          alpha[i] = dot(s_hist[i], dir) / dot(y_hist[i], s_hist[i]);
          for (std::size_t p = 0; p < dir.size(); ++p) dir[p] -= alpha[i] * y_hist[i][p];
        }
        const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
        for (auto& v : dir) v *= gamma;
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
          const double beta = dot(y_hist[i], dir) / dot(y_hist[i], s_hist[i]);
          for (std::size_t p = 0; p < dir.size(); ++p) dir[p] += (alpha[i] - beta) * s_hist[i][p];
        }
        if (dot(dir, grad) <= 0.0) {
          quasi_newton = false;
          s_hist.clear();
          y_hist.clear();
          continue;
        }
      } else {
        dir = grad;
        step = options.learning_rate;
      }
      for (int attempt = 0; attempt < 60; ++attempt) {
        for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + step * dir[i];
        problem.clip(trial);
        trial_phi = problem.fidelity(trial);
        if (trial_phi > phi) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted && quasi_newton) {
        quasi_newton = false;
        s_hist.clear();
        y_hist.clear();
      }
    }
    if (!accepted) break;

    const double improvement = trial_phi - phi;
    const double new_phi = problem.fidelity_and_gradient(trial, trial_grad);
    std::vector<double> s(u.size());
    std::vector<double> y(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      s[i] = trial[i] - u[i];
      y[i] = grad[i] - trial_grad[i];  // gradient change of -phi
    }
    if (dot(s, y) > 1e-14) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    u.swap(trial);
    grad.swap(trial_grad);
    phi = new_phi;
    if (improvement < options.min_improvement) {
      if (++stalled >= kStallLimit) {
        ++iter;
        break;
      }
      s_hist.clear();
      y_hist.clear();
    } else {
      stalled = 0;
    }
  }
  return {phi, iter};
}

}  // namespace

double grape_objective(std::span<const ComplexMatrix> controls, const ComplexMatrix& target,
                       double dt, std::span<const double> u, std::vector<double>* gradient) {
  if (controls.empty()) throw ArgumentError("grape_objective: no controls");
  if (u.size() % controls.size() != 0) {
    throw ArgumentError("grape_objective: amplitude count is not a multiple of the control count");
  }
  for (const auto& c : controls) {
    if (c.rows() != target.rows() || c.cols() != target.cols()) {
      throw ArgumentError("grape_objective: control and target dimensions differ");
    }
  }
  const GrapeProblem problem(std::vector<ComplexMatrix>(controls.begin(), controls.end()), target,
                             dt, u.size() / controls.size(),
                             std::numeric_limits<double>::infinity());
  const std::vector<double> amplitudes(u.begin(), u.end());
  if (gradient == nullptr) return problem.fidelity(amplitudes);
  return problem.fidelity_and_gradient(amplitudes, *gradient);
}

GrapeResult grape_compile(const GateSpec& gate, const Processor& proc, double evo_time,
                          int num_tslots, std::uint64_t seed, const GrapeOptions& options) {
  if (num_tslots < 1) throw ArgumentError("grape_compile: num_tslots must be >= 1");
  if (!(evo_time > 0.0) || !std::isfinite(evo_time)) {
    throw ArgumentError("grape_compile: evo_time must be positive");
  }
  validate_gate(gate, proc.n_qubits);

  // Restrict to the chain segment that spans the gate when the processor
  // layout allows it; otherwise optimize over the full register.
  std::vector<std::size_t> global_controls;
  std::vector<ComplexMatrix> local_controls;
  ComplexMatrix local_target;
  if (is_chain_layout(proc)) {
    const auto [lo, hi] =
        std::minmax_element(gate.acting_qubits.begin(), gate.acting_qubits.end());
    const std::size_t first = *lo;
    const std::size_t last = *hi;
    const std::size_t span_qubits = last - first + 1;
    global_controls = chain_controls_on_path(proc.n_qubits, first, last);
    local_controls = build_spin_chain_processor(span_qubits).controls;
    std::vector<std::size_t> rel;
    for (std::size_t q : gate.acting_qubits) rel.push_back(q - first);
    local_target = embed_operator(gate.target_unitary, rel, span_qubits);
  } else {
    for (std::size_t j = 0; j < proc.n_controls(); ++j) global_controls.push_back(j);
    local_controls = proc.controls;
    local_target = embed_operator(gate.target_unitary, gate.acting_qubits, proc.n_qubits);
  }

  const auto slots = static_cast<std::size_t>(num_tslots);
  const double dt = evo_time / static_cast<double>(num_tslots);
  const std::size_t m_local = local_controls.size();
  GrapeProblem problem(std::move(local_controls), local_target, dt, slots, proc.u_max);

  // Deterministic multi-start: each restart draws a fresh, wider initial
  // guess from the same seeded stream and the best run is kept.
  std::mt19937_64 rng(seed);
  std::vector<double> u;
  double phi = -1.0;
  int iter = 0;
  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    const double width =
        std::min(1.0, options.init_fraction * (1.0 + attempt)) * proc.u_max;
    std::uniform_real_distribution<double> init(-width, width);
    std::vector<double> trial(problem.n_params());
    for (auto& v : trial) v = init(rng);
    const AscentOutcome outcome = ascend(problem, trial, options);
    iter += outcome.iterations;
    if (outcome.fidelity > phi) {
      phi = outcome.fidelity;
      u = std::move(trial);
    }
    if (phi >= options.restart_threshold) break;
  }

  GrapeResult result;
  result.gate_fidelity = phi;
  result.iterations = iter;
  for (std::size_t k = 0; k < slots; ++k) {
    PulseSlice s;
    s.duration = dt;
    s.amplitudes.assign(proc.n_controls(), 0.0);
    for (std::size_t j = 0; j < m_local; ++j) s.amplitudes[global_controls[j]] = u[k * m_local + j];
    s.slice_index = k;
    result.schedule.push_back(std::move(s));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Cache and circuit schedules

namespace {

std::string cache_key(const GateSpec& gate, const Processor& proc, const Gene& gene,
                      std::uint64_t seed) {
  std::ostringstream key;
  key << gate.name << '|';
  for (std::size_t q : gate.acting_qubits) key << q << ',';
  key << '|' << proc.n_qubits << '|' << std::hex << std::bit_cast<std::uint64_t>(gene.evo_time)
      << '|' << std::dec << gene.num_tslots << '|' << seed;
  // Distinguish same-named gates with different matrices.
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& v : gate.target_unitary.data()) {
    for (double part : {v.real(), v.imag()}) {
      h ^= std::bit_cast<std::uint64_t>(part);
      h *= 1099511628211ULL;
    }
  }
  key << '|' << std::hex << h;
  return key.str();
}

}  // namespace

std::shared_ptr<const GrapeResult> CompilationCache::get_or_compile(const GateSpec& gate,
                                                                    const Processor& proc,
                                                                    const Gene& gene,
                                                                    std::uint64_t seed) {
  const std::string key = cache_key(gate, proc, gene, seed);
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto compiled = std::make_shared<const GrapeResult>(
      grape_compile(gate, proc, gene.evo_time, gene.num_tslots, seed, options));
  std::unique_lock lock(mutex_);
  ++compiles_;
  entries_[key] = compiled;
  return compiled;
}

std::size_t CompilationCache::compile_count() const {
  std::shared_lock lock(mutex_);
  return compiles_;
}

std::size_t CompilationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void CompilationCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
  compiles_ = 0;
}

PulseSchedule schedule_for_circuit(std::span<const GateSpec> circuit, const Processor& proc,
                                   std::span<const Gene> genome, CompilationCache& cache,
                                   std::uint64_t seed) {
  if (genome.size() != circuit.size()) {
    throw ArgumentError("schedule_for_circuit: genome length " + std::to_string(genome.size()) +
                        " does not match circuit length " + std::to_string(circuit.size()));
  }
  PulseSchedule out;
  for (std::size_t g = 0; g < circuit.size(); ++g) {
    const auto compiled = cache.get_or_compile(circuit[g], proc, genome[g], seed);
    out.append(compiled->schedule, g);
  }
  return out;
}

Gene baseline_gene(const GateSpec& gate) {
  return gate.acting_qubits.size() == 1 ? Gene{1.0, 10} : Gene{3.0, 12};
}

// ---------------------------------------------------------------------------
// CSV

void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule,
                        std::size_t n_controls) {
  out << "gate_index,slice_index,duration";
  for (std::size_t j = 0; j < n_controls; ++j) out << ",u_" << j;
  out << '\n';
  char buf[64];
  for (const auto& s : schedule.slices()) {
    if (s.amplitudes.size() != n_controls) {
      throw ArgumentError("write_schedule_csv: slice amplitude count mismatch");
    }
    out << s.gate_index << ',' << s.slice_index;
    std::snprintf(buf, sizeof buf, ",%.17g", s.duration);
    out << buf;
    for (double a : s.amplitudes) {
      std::snprintf(buf, sizeof buf, ",%.17g", a);
      out << buf;
    }
    out << '\n';
  }
}

void write_schedule_csv(const std::string& path, const PulseSchedule& schedule,
                        std::size_t n_controls) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_schedule_csv(out, schedule, n_controls);
  if (!out) throw IoError("failed writing " + path);
}

PulseSchedule read_schedule_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.rfind("gate_index,slice_index,duration", 0) != 0) {
    throw ParseError(line_no, path + ":1: missing schedule header");
  }
  const std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  PulseSchedule schedule;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != columns) {
      throw ParseError(line_no, path + ":" + std::to_string(line_no) + ": expected " +
                                    std::to_string(columns) + " fields");
    }
    try {
      PulseSlice s;
      s.gate_index = std::stoul(fields[0]);
      s.slice_index = std::stoul(fields[1]);
      s.duration = std::stod(fields[2]);
      for (std::size_t i = 3; i < fields.size(); ++i) s.amplitudes.push_back(std::stod(fields[i]));
      schedule.push_back(std::move(s));
    } catch (const std::logic_error&) {
      throw ParseError(line_no, path + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  return schedule;
}

}  // namespace pulsega
