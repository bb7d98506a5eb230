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
 * Lindblad evolution of a density matrix under a piecewise-constant pulse
 * schedule.
 *
 * Density matrices are vectorized by stacking columns: vec(rho)[c * d + r]
 * = rho(r, c), so vec(A X B) = (B^T kron A) vec(X).
 */

#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pulsega/noise.hpp"
#include "pulsega/pulse.hpp"
#include "pulsega/qmath.hpp"

namespace pulsega {

struct Liouvillian {
  ComplexMatrix superoperator;  // d^2 x d^2
  std::size_t hilbert_dim = 0;
};

/// L = -i(I kron H - H^T kron I)
///     + sum_j [conj(C) kron C - 1/2 I kron C^dag C - 1/2 (C^dag C)^T kron I]
Liouvillian build_liouvillian(const ComplexMatrix& h, std::span<const CollapseOperator> collapse);

std::vector<cplx> vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(std::span<const cplx> v, std::size_t d);

enum class PropagationMethod {
  /// exp(L dt) applied to the state by a substepped Taylor series.
  Action,
  /// Dense exp(L dt) by scaling and squaring, cached per slice.
  DenseExponential,
};

struct SolverOptions {
  int max_substeps = 100000;
  double substep_tolerance = 1e-8;
  PropagationMethod method = PropagationMethod::Action;

  void validate() const;
};

/// exp(t L) v. Throws NumericalInstabilityError when more than
/// opts.max_substeps substeps would be needed.
std::vector<cplx> apply_exponential(const ComplexMatrix& generator, double t,
                                    std::span<const cplx> v, const SolverOptions& opts = {});

/// Thread-safe store of slice propagators. Values for one key are always
/// identical, so racing inserts are harmless.
class ExponentialCache {
 public:
  explicit ExponentialCache(std::size_t capacity = 4096) : capacity_(capacity) {}

  std::shared_ptr<const ComplexMatrix> find(const std::string& key) const;
  void insert(const std::string& key, std::shared_ptr<const ComplexMatrix> value);

  std::size_t size() const;
  std::size_t hits() const;
  void clear();

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const ComplexMatrix>> entries_;
  std::size_t capacity_;
  mutable std::atomic<std::size_t> hits_{0};
};

/// Evolves rho0 slice by slice under H = H_drift + sum_j u_j H_j and the
/// given collapse operators. With no collapse operators each slice applies
/// U rho U^dag directly. The result is projected back onto the density
/// matrices; a violation above 1e-6 raises NumericalInstabilityError.
DensityMatrix propagate(const DensityMatrix& rho0, const PulseSchedule& schedule,
                        const Processor& proc, std::span<const CollapseOperator> collapse,
                        const SolverOptions& opts = {}, ExponentialCache* cache = nullptr);

}  // namespace pulsega
