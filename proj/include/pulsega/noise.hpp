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
 * Physical noise parameters, lowered either to Lindblad collapse operators
 * for continuous evolution or to Kraus channels for discrete application.
 */

#include <string>
#include <string_view>
#include <vector>

#include "pulsega/qmath.hpp"

namespace pulsega {

struct NoiseParams {
  double t1 = 50.0;
  double t2 = 30.0;
  double p_bit_flip = 0.0;
  double p_phase_flip = 0.0;
  double p_bit_phase_flip = 0.0;
  double p_depolarizing = 0.0;

  /// Infinite t1 and t2 and no discrete errors.
  static NoiseParams noiseless();
  bool is_noiseless() const;

  /// Throws ArgumentError unless t1, t2 > 0, t2 <= 2 t1 and every
  /// probability lies in [0, 1]. An infinite t1 or t2 disables that term.
  void validate() const;

  bool operator==(const NoiseParams&) const = default;
};

struct CollapseOperator {
  ComplexMatrix op;  // full n-qubit dimension
  std::string label;  // e.g. "relax[q0]"
};

/// Per qubit: sqrt(1/t1) sigma^-, sqrt(1/(2 t2)) sigma_z, plus one Pauli
/// operator for every nonzero discrete probability, with the probability
/// p converted to the rate -ln(1 - p) / total_time. Depolarizing adds
/// sigma_x, sigma_y and sigma_z, each at probability p / 3.
std::vector<CollapseOperator> build_collapse_operators(const NoiseParams& params,
                                                       std::size_t n_qubits,
                                                       double total_time);

/// Rate that the discrete probability p maps to over total_time.
double discrete_error_rate(double p, double total_time);

enum class ChannelKind {
  BitFlip,
  PhaseFlip,
  BitPhaseFlip,
  Depolarizing,
  AmplitudeDamping,
  PhaseDamping,
};

std::string_view to_string(ChannelKind kind);

struct KrausChannel {
  std::vector<ComplexMatrix> operators;

  /// max |sum E^dagger E - I|
  double completeness_defect() const;
};

/// Single-qubit Kraus channel; param must lie in [0, 1].
KrausChannel kraus_channel(ChannelKind kind, double param);

/// Lift a single-qubit channel to act on `qubit` of an n-qubit register.
KrausChannel lift_channel(const KrausChannel& channel, std::size_t qubit,
                          std::size_t n_qubits);

/// sum_l E_l rho E_l^dagger
DensityMatrix apply_kraus(const KrausChannel& channel, const DensityMatrix& rho);

}  // namespace pulsega
