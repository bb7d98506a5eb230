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

#include "pulsega/noise.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pulsega/errors.hpp"

namespace pulsega {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << name << " must lie in [0, 1], got " << p;
    throw ArgumentError(msg.str());
  }
}

ComplexMatrix lift(const ComplexMatrix& single, std::size_t qubit, std::size_t n_qubits) {
  const std::size_t q[] = {qubit};
  return embed_operator(single, q, n_qubits);
}

}  // namespace

NoiseParams NoiseParams::noiseless() {
  const double inf = std::numeric_limits<double>::infinity();
  return NoiseParams{inf, inf, 0.0, 0.0, 0.0, 0.0};
}

bool NoiseParams::is_noiseless() const {
  return std::isinf(t1) && std::isinf(t2) && p_bit_flip == 0.0 && p_phase_flip == 0.0 &&
         p_bit_phase_flip == 0.0 && p_depolarizing == 0.0;
}

void NoiseParams::validate() const {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw ArgumentError("t1 and t2 must be positive");
  if (std::isfinite(t2) && t2 > 2.0 * t1) throw ArgumentError("t2 must not exceed 2 * t1");
  check_probability(p_bit_flip, "p_bit_flip");
  check_probability(p_phase_flip, "p_phase_flip");
  check_probability(p_bit_phase_flip, "p_bit_phase_flip");
  check_probability(p_depolarizing, "p_depolarizing");
}

double discrete_error_rate(double p, double total_time) {
  check_probability(p, "error probability");
  if (p >= 1.0) throw ArgumentError("error probability 1 maps to an infinite rate");
  if (!(total_time > 0.0)) throw ArgumentError("total_time must be positive");
  return -std::log1p(-p) / total_time;
}

std::vector<CollapseOperator> build_collapse_operators(const NoiseParams& params,
                                                       std::size_t n_qubits,
                                                       double total_time) {
  params.validate();
  if (n_qubits < 1) throw ArgumentError("n_qubits must be at least 1");
  if (!(total_time > 0.0)) throw ArgumentError("total_time must be positive");

  struct Term {
    const char* name;
    ComplexMatrix op;  // single-qubit, rate already folded in
  };
  std::vector<Term> terms;
  if (std::isfinite(params.t1)) {
    terms.push_back({"relax", std::sqrt(1.0 / params.t1) * sigma_minus()});
  }
  if (std::isfinite(params.t2)) {
    terms.push_back({"dephase", std::sqrt(1.0 / (2.0 * params.t2)) * pauli_z()});
  }
  auto add_pauli = [&](double p, const char* name, const ComplexMatrix& pauli) {
    if (p == 0.0) return;
    terms.push_back({name, std::sqrt(discrete_error_rate(p, total_time)) * pauli});
  };
  add_pauli(params.p_bit_flip, "bit_flip", pauli_x());
  add_pauli(params.p_phase_flip, "phase_flip", pauli_z());
  add_pauli(params.p_bit_phase_flip, "bit_phase_flip", pauli_y());
  if (params.p_depolarizing >= 1.0) {
    throw ArgumentError("error probability 1 maps to an infinite rate");
  }
  add_pauli(params.p_depolarizing / 3.0, "depol_x", pauli_x());
  add_pauli(params.p_depolarizing / 3.0, "depol_y", pauli_y());
  add_pauli(params.p_depolarizing / 3.0, "depol_z", pauli_z());

  std::vector<CollapseOperator> out;
  out.reserve(terms.size() * n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    for (const auto& t : terms) {
      out.push_back({lift(t.op, q, n_qubits), std::string(t.name) + "[q" + std::to_string(q) + "]"});
    }
  }
  return out;
}

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::BitFlip: return "bit_flip";
    case ChannelKind::PhaseFlip: return "phase_flip";
    case ChannelKind::BitPhaseFlip: return "bit_phase_flip";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::AmplitudeDamping: return "amplitude_damping";
    case ChannelKind::PhaseDamping: return "phase_damping";
  }
  return "unknown";
}

double KrausChannel::completeness_defect() const {
  if (operators.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t d = operators.front().cols();
  ComplexMatrix sum(d, d);
  for (const auto& e : operators) sum += e.adjoint() * e;
  return max_abs_diff(sum, ComplexMatrix::identity(d));
}

KrausChannel kraus_channel(ChannelKind kind, double param) {
  check_probability(param, "channel parameter");
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const double keep = std::sqrt(1.0 - param);
  const double flip = std::sqrt(param);
  KrausChannel ch;
  switch (kind) {
    case ChannelKind::BitFlip:
      ch.operators = {keep * id, flip * pauli_x()};
      break;
    case ChannelKind::PhaseFlip:
      ch.operators = {keep * id, flip * pauli_z()};
      break;
    case ChannelKind::BitPhaseFlip:
      ch.operators = {keep * id, flip * pauli_y()};
      break;
    case ChannelKind::Depolarizing: {
      const double third = std::sqrt(param / 3.0);
      ch.operators = {keep * id, third * pauli_x(), third * pauli_y(), third * pauli_z()};
      break;
    }
    case ChannelKind::AmplitudeDamping:
      ch.operators = {ComplexMatrix{{1.0, 0.0}, {0.0, keep}},
                      ComplexMatrix{{0.0, flip}, {0.0, 0.0}}};
      break;
    case ChannelKind::PhaseDamping:
      // {sqrt(1-l) I, sqrt(l)|0><0|} alone is not trace preserving; the
      // sqrt(l)|1><1| branch completes it.
      ch.operators = {keep * id, ComplexMatrix{{flip, 0.0}, {0.0, 0.0}},
                      ComplexMatrix{{0.0, 0.0}, {0.0, flip}}};
      break;
  }
  // Zero-weight branches carry no information.
  std::erase_if(ch.operators, [](const ComplexMatrix& e) { return e.max_abs() == 0.0; });
  return ch;
}

KrausChannel lift_channel(const KrausChannel& channel, std::size_t qubit,
                          std::size_t n_qubits) {
  KrausChannel out;
  out.operators.reserve(channel.operators.size());
  for (const auto& e : channel.operators) out.operators.push_back(lift(e, qubit, n_qubits));
  return out;
}

DensityMatrix apply_kraus(const KrausChannel& channel, const DensityMatrix& rho) {
  if (channel.operators.empty()) throw ArgumentError("apply_kraus: empty channel");
  const std::size_t d = rho.dim();
  ComplexMatrix out(d, d);
  for (const auto& e : channel.operators) {
    if (e.rows() != d || e.cols() != d) throw ArgumentError("apply_kraus: dimension mismatch");
    out += e * rho.matrix() * e.adjoint();
  }
  return project_to_density_matrix(out, 1e-10);
}

}  // namespace pulsega
