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

#include "pulsega/circuits.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "pulsega/errors.hpp"

namespace pulsega {

namespace {

void append_all(std::vector<GateSpec>& out, std::size_t n, GateSpec (*make)(std::size_t)) {
  for (std::size_t q = 0; q < n; ++q) out.push_back(make(q));
}

void append_grover_oracle(std::vector<GateSpec>& out, std::size_t n) {
  append_all(out, n, gates::x);
  for (std::size_t q = 0; q + 1 < n; ++q) out.push_back(gates::cnot(q, q + 1));
  append_all(out, n, gates::x);
}

}  // namespace

Circuit build_deutsch_jozsa(std::size_t n_inputs, OracleKind oracle) {
  if (n_inputs < 1 || n_inputs > 3) throw ArgumentError("Deutsch-Jozsa needs 1 to 3 input qubits");
  const std::size_t n = n_inputs + 1;
  const std::size_t ancilla = n_inputs;
  Circuit c;
  c.name = "DeutschJozsa_" + std::to_string(n) + "Q";
  c.n_qubits = n;
  c.gates.push_back(gates::x(ancilla));
  append_all(c.gates, n, gates::h);
  if (oracle == OracleKind::BalancedXor) {
    for (std::size_t q = 0; q < n_inputs; ++q) c.gates.push_back(gates::cnot(q, ancilla));
  }
  append_all(c.gates, n_inputs, gates::h);
  return c;
}

std::size_t grover_iterations(std::size_t n_qubits) {
  const double size = std::ldexp(1.0, static_cast<int>(n_qubits));
  return static_cast<std::size_t>(std::floor(std::numbers::pi / 4.0 * std::sqrt(size)));
}

Circuit build_grover(std::size_t n_qubits) {
  if (n_qubits < 2 || n_qubits > 4) throw ArgumentError("Grover needs 2 to 4 qubits");
  Circuit c;
  c.name = "Grover_" + std::to_string(n_qubits) + "Q";
  c.n_qubits = n_qubits;
  append_all(c.gates, n_qubits, gates::h);
  for (std::size_t it = 0; it < grover_iterations(n_qubits); ++it) {
    append_grover_oracle(c.gates, n_qubits);
    append_all(c.gates, n_qubits, gates::h);
    append_grover_oracle(c.gates, n_qubits);
    append_all(c.gates, n_qubits, gates::h);
  }
  return c;
}

ComplexMatrix circuit_unitary(const Circuit& circuit) {
  const std::size_t d = std::size_t{1} << circuit.n_qubits;
  ComplexMatrix u = ComplexMatrix::identity(d);
  for (const auto& g : circuit.gates) {
    validate_gate(g, circuit.n_qubits);
    u = embed_operator(g.target_unitary, g.acting_qubits, circuit.n_qubits) * u;
  }
  return u;
}

PureState ideal_output_state(const Circuit& circuit) {
  if (circuit.n_qubits < 1) throw ArgumentError("circuit has no qubits");
  const std::size_t d = std::size_t{1} << circuit.n_qubits;
  std::vector<cplx> psi(d);
  psi[0] = 1.0;
  for (const auto& g : circuit.gates) {
    validate_gate(g, circuit.n_qubits);
    psi = matvec(embed_operator(g.target_unitary, g.acting_qubits, circuit.n_qubits), psi);
  }
  return PureState::normalized(std::move(psi));
}

void write_circuit_text(std::ostream& out, const Circuit& circuit) {
  out << "index,name,qubits\n";
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const auto& g = circuit.gates[i];
    out << i << ',' << g.name << ',';
    for (std::size_t k = 0; k < g.acting_qubits.size(); ++k) {
      if (k > 0) out << ' ';
      out << g.acting_qubits[k];
    }
    out << '\n';
  }
}

}  // namespace pulsega
