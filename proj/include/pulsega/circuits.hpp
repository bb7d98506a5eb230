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
 * Deutsch-Jozsa and Grover benchmark circuits as gate lists.
 */

#include <iosfwd>
#include <string>
#include <vector>

#include "pulsega/pulse.hpp"
#include "pulsega/qmath.hpp"

namespace pulsega {

struct Circuit {
  std::string name;
  std::size_t n_qubits = 0;
  std::vector<GateSpec> gates;
};

enum class OracleKind {
  BalancedXor,  // CNOT from every input onto the ancilla
  Constant,     // no oracle gates
};

/// X on the ancilla, H on every qubit, the oracle, then H on the inputs.
/// The ancilla is the last qubit. Requires 1 <= n_inputs <= 3.
Circuit build_deutsch_jozsa(std::size_t n_inputs, OracleKind oracle = OracleKind::BalancedXor);

/// floor(pi/4 * sqrt(2^n))
std::size_t grover_iterations(std::size_t n_qubits);

/// H on all qubits, then grover_iterations(n) rounds of
/// [oracle, H on all, oracle, H on all] where the oracle block is X on all,
/// the CNOT chain q_i -> q_{i+1}, X on all. Requires 2 <= n_qubits <= 4.
Circuit build_grover(std::size_t n_qubits);

/// Product of the gate unitaries over the full register, first gate rightmost.
ComplexMatrix circuit_unitary(const Circuit& circuit);

/// The circuit applied to |0...0>.
PureState ideal_output_state(const Circuit& circuit);

/// One `index,name,qubits` row per gate, qubits joined by spaces.
void write_circuit_text(std::ostream& out, const Circuit& circuit);

}  // namespace pulsega
