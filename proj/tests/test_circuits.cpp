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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pulsega/circuits.hpp"
#include "pulsega/errors.hpp"

using namespace pulsega;

namespace {

std::size_t count_named(const Circuit& c, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& g : c.gates) n += g.name.rfind(prefix, 0) == 0;
  return n;
}

// Probability that the leading `bits` qubits read all zeros.
double prob_leading_zero(const PureState& psi, std::size_t n_qubits, std::size_t bits) {
  double p = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    if ((i >> (n_qubits - bits)) == 0) p += std::norm(psi[i]);
  }
  return p;
}

}  // namespace

TEST_CASE("Deutsch-Jozsa gate counts") {
  const Circuit c3 = build_deutsch_jozsa(3);
  CHECK(c3.n_qubits == 4);
  CHECK(c3.gates.size() == 11);
  CHECK(count_named(c3, "CNOT") == 3);
  CHECK(count_named(c3, "H") == 7);
  CHECK(count_named(c3, "X") == 1);
  CHECK(c3.gates.front().acting_qubits == std::vector<std::size_t>{3});
  CHECK(build_deutsch_jozsa(1).gates.size() == 5);
  CHECK(build_deutsch_jozsa(2).gates.size() == 8);
  CHECK(build_deutsch_jozsa(2, OracleKind::Constant).gates.size() == 6);
  CHECK_THROWS_AS(build_deutsch_jozsa(0), ArgumentError);
  CHECK_THROWS_AS(build_deutsch_jozsa(4), ArgumentError);
}

TEST_CASE("balanced oracle never leaves the inputs at zero") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Circuit c = build_deutsch_jozsa(n);
    const PureState psi = ideal_output_state(c);
    CHECK(prob_leading_zero(psi, n + 1, n) < 1e-12);
    // Inputs end in |1...1>.
    double p_ones = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      if ((i >> 1) == (std::size_t{1} << n) - 1) p_ones += std::norm(psi[i]);
    }
    CHECK(p_ones == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("constant oracle returns the inputs to zero") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const PureState psi = ideal_output_state(build_deutsch_jozsa(n, OracleKind::Constant));
    CHECK(prob_leading_zero(psi, n + 1, n) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Grover iteration counts and structure") {
  CHECK(grover_iterations(2) == 1);
  CHECK(grover_iterations(3) == 2);
  CHECK(grover_iterations(4) == 3);
  const Circuit g4 = build_grover(4);
  // Two oracle blocks per iteration, three CNOTs each.
  CHECK(count_named(g4, "CNOT") == 3 * 2 * 3);
  const Circuit g2 = build_grover(2);
  // H x2, then [X2 C X2, H2, X2 C X2, H2].
  CHECK(g2.gates.size() == 2 + 5 + 2 + 5 + 2);
  CHECK_THROWS_AS(build_grover(1), ArgumentError);
  CHECK_THROWS_AS(build_grover(5), ArgumentError);
}

TEST_CASE("property: circuits are unitary and outputs normalized") {
  std::vector<Circuit> all;
  for (std::size_t n = 1; n <= 3; ++n) {
    all.push_back(build_deutsch_jozsa(n));
    all.push_back(build_deutsch_jozsa(n, OracleKind::Constant));
  }
  for (std::size_t n = 2; n <= 4; ++n) all.push_back(build_grover(n));
  for (const Circuit& c : all) {
    const ComplexMatrix u = circuit_unitary(c);
    CHECK(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(u.rows())) < 1e-10);
    const PureState psi = ideal_output_state(c);
    double norm = 0.0;
    for (const auto& a : psi.amplitudes()) norm += std::norm(a);
    CHECK(std::abs(norm - 1.0) < 1e-12);
    for (const auto& g : c.gates)
      for (std::size_t q : g.acting_qubits) CHECK(q < c.n_qubits);
  }
}

TEST_CASE("small hand-built circuits") {
  const Circuit empty{"empty", 2, {}};
  CHECK(ideal_output_state(empty)[0] == cplx{1.0});
  const Circuit h{"h", 1, {gates::h(0)}};
  const PureState plus = ideal_output_state(h);
  CHECK(std::abs(plus[0] - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(plus[1] - std::sqrt(0.5)) < 1e-15);
}

TEST_CASE("textbook two-qubit Grover finds |11> with certainty") {
  // CZ marks |11>; diffusion is H X CZ X H up to global phase.
  const Circuit c{"textbook", 2,
                  {gates::h(0), gates::h(1), gates::cz(0, 1), gates::h(0), gates::h(1),
                   gates::x(0), gates::x(1), gates::cz(0, 1), gates::x(0), gates::x(1),
                   gates::h(0), gates::h(1)}};
  const double theta = std::asin(0.5);
  const double analytic = std::pow(std::sin(3 * theta), 2);
  CHECK(analytic == doctest::Approx(1.0));
  CHECK(std::norm(ideal_output_state(c)[3]) == doctest::Approx(analytic).epsilon(1e-12));
}

TEST_CASE("text gate list") {
  std::ostringstream out;
  write_circuit_text(out, build_deutsch_jozsa(1));
  const std::string text = out.str();
  CHECK(text.rfind("index,name,qubits\n", 0) == 0);
  CHECK(text.find("0,X,1\n") != std::string::npos);
  CHECK(text.find("3,CNOT,0 1\n") != std::string::npos);
}
