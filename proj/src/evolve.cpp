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

#include "pulsega/evolve.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>

#include "pulsega/errors.hpp"

namespace pulsega {

namespace {

void check_square(const ComplexMatrix& m, std::size_t d, const char* what) {
  if (m.rows() != d || m.cols() != d) {
    std::ostringstream msg;
    msg << what << ": expected " << d << "x" << d << ", got " << m.rows() << "x" << m.cols();
    throw ArgumentError(msg.str());
  }
}

// L += -i(I kron H - H^T kron I)
void add_hamiltonian_part(ComplexMatrix& L, const ComplexMatrix& h) {
  const std::size_t d = h.rows();
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        L(a * d + i, a * d + j) += -kI * h(i, j);
      }
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      const cplx hba = h(b, a);
      if (hba == cplx{}) continue;
      for (std::size_t i = 0; i < d; ++i) L(a * d + i, b * d + i) += kI * hba;
    }
  }
}

ComplexMatrix dissipator(std::span<const CollapseOperator> collapse, std::size_t d) {
  ComplexMatrix D(d * d, d * d);
  for (const auto& c : collapse) {
    check_square(c.op, d, "collapse operator");
    const ComplexMatrix& C = c.op;
    const ComplexMatrix K = C.adjoint() * C;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        const cplx cab = std::conj(C(a, b));
        if (cab != cplx{}) {
          for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) D(a * d + i, b * d + j) += cab * C(i, j);
          }
        }
        const cplx kba = K(b, a);
        if (kba != cplx{}) {
          for (std::size_t i = 0; i < d; ++i) D(a * d + i, b * d + i) -= 0.5 * kba;
        }
      }
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) D(a * d + i, a * d + j) -= 0.5 * K(i, j);
      }
    }
  }
  return D;
}

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
  for (int byte = 0; byte < 8; ++byte) {
    h ^= (word >> (8 * byte)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t collapse_fingerprint(std::span<const CollapseOperator> collapse) {
  std::uint64_t h = 14695981039346656037ull;
  h = fnv1a(h, collapse.size());
  for (const auto& c : collapse) {
    for (const cplx& x : c.op.data()) {
      h = fnv1a(h, std::bit_cast<std::uint64_t>(x.real()));
      h = fnv1a(h, std::bit_cast<std::uint64_t>(x.imag()));
    }
  }
  return h;
}

std::string slice_key(char tag, std::uint64_t fingerprint, double dt,
                      std::span<const double> amplitudes) {
  std::ostringstream key;
  key << tag << std::hex << fingerprint << ':' << std::bit_cast<std::uint64_t>(dt);
  for (double u : amplitudes) key << ':' << std::bit_cast<std::uint64_t>(u);
  return key.str();
}

int squarings_allowed(int max_substeps) {
  return static_cast<int>(std::floor(std::log2(static_cast<double>(max_substeps))));
}

template <typename Fn>
std::shared_ptr<const ComplexMatrix> cached(ExponentialCache* cache, const std::string& key,
                                            Fn&& compute) {
  if (cache != nullptr) {
    if (auto hit = cache->find(key)) return hit;
  }
  auto value = std::make_shared<const ComplexMatrix>(compute());
  if (cache != nullptr) cache->insert(key, value);
  return value;
}

}  // namespace

Liouvillian build_liouvillian(const ComplexMatrix& h, std::span<const CollapseOperator> collapse) {
  if (!h.is_square()) throw ArgumentError("build_liouvillian: Hamiltonian must be square");
  const std::size_t d = h.rows();
  Liouvillian out{dissipator(collapse, d), d};
  add_hamiltonian_part(out.superoperator, h);
  return out;
}

std::vector<cplx> vectorize(const ComplexMatrix& m) {
  std::vector<cplx> v(m.rows() * m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < m.rows(); ++r) v[c * m.rows() + r] = m(r, c);
  }
  return v;
}

ComplexMatrix unvectorize(std::span<const cplx> v, std::size_t d) {
  if (v.size() != d * d) throw ArgumentError("unvectorize: length is not d^2");
  ComplexMatrix m(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) m(r, c) = v[c * d + r];
  }
  return m;
}

void SolverOptions::validate() const {
  if (max_substeps < 1) throw ArgumentError("max_substeps must be at least 1");
  if (!(substep_tolerance > 0.0)) throw ArgumentError("substep_tolerance must be positive");
}

std::vector<cplx> apply_exponential(const ComplexMatrix& generator, double t,
                                    std::span<const cplx> v, const SolverOptions& opts) {
  opts.validate();
  if (!generator.is_square() || generator.cols() != v.size()) {
    throw ArgumentError("apply_exponential: dimension mismatch");
  }
  const double norm = generator.norm1() * std::abs(t);
  if (!std::isfinite(norm)) throw NumericalInstabilityError(norm, "generator is not finite");
  const double substeps = std::max(1.0, std::ceil(norm));
  if (substeps > static_cast<double>(opts.max_substeps)) {
    std::ostringstream msg;
    msg << "exp(tL) needs " << substeps << " substeps, limit is " << opts.max_substeps;
    throw NumericalInstabilityError(substeps, msg.str());
  }
  const auto s = static_cast<long>(substeps);
  const cplx h = t / substeps;

  std::vector<cplx> acc(v.begin(), v.end());
  std::vector<cplx> term(v.size());
  std::vector<cplx> next;
  for (long step = 0; step < s; ++step) {
    term = acc;
    int small = 0;
    for (int k = 1; k <= 200; ++k) {
      next = matvec(generator, term);
      const cplx scale = h / static_cast<double>(k);
      for (std::size_t i = 0; i < next.size(); ++i) term[i] = scale * next[i];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
      // Two consecutive negligible terms end the series.
      if (max_abs(term) <= opts.substep_tolerance * max_abs(acc)) {
        if (++small == 2) break;
      } else {
        small = 0;
      }
    }
  }
  return acc;
}

std::shared_ptr<const ComplexMatrix> ExponentialCache::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  hits_.fetch_add(1, std::memory_order_relaxed);
  return it->second;
}

void ExponentialCache::insert(const std::string& key, std::shared_ptr<const ComplexMatrix> value) {
  std::unique_lock lock(mutex_);
  if (entries_.size() >= capacity_ && !entries_.contains(key)) return;
  entries_[key] = std::move(value);
}

std::size_t ExponentialCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::size_t ExponentialCache::hits() const {
  return hits_.load(std::memory_order_relaxed);
}

void ExponentialCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
  hits_ = 0;
}

DensityMatrix propagate(const DensityMatrix& rho0, const PulseSchedule& schedule,
                        const Processor& proc, std::span<const CollapseOperator> collapse,
                        const SolverOptions& opts, ExponentialCache* cache) {
  opts.validate();
  const std::size_t d = proc.dim();
  if (rho0.dim() != d) throw ArgumentError("propagate: state dimension does not match processor");
  for (const auto& c : collapse) check_square(c.op, d, "collapse operator");
  for (const auto& slice : schedule.slices()) {
    if (slice.amplitudes.size() != proc.n_controls()) {
      throw ArgumentError("propagate: slice amplitude count does not match processor");
    }
  }
  if (schedule.empty()) return rho0;

  const std::uint64_t fingerprint = collapse_fingerprint(collapse);
  ComplexMatrix out;

  if (collapse.empty()) {
    ComplexMatrix rho = rho0.matrix();
    for (const auto& slice : schedule.slices()) {
      const auto U = cached(cache, slice_key('U', fingerprint, slice.duration, slice.amplitudes), [&] {
        ComplexMatrix a = slice_hamiltonian(proc, slice.amplitudes);
        a *= cplx{0.0, -slice.duration};
        return matrix_exponential(a, squarings_allowed(opts.max_substeps));
      });
      rho = *U * rho * U->adjoint();
    }
    out = std::move(rho);
  } else {
    const ComplexMatrix D = dissipator(collapse, d);
    std::vector<cplx> v = vectorize(rho0.matrix());
    for (const auto& slice : schedule.slices()) {
      auto generator = [&] {
        ComplexMatrix L = D;
        add_hamiltonian_part(L, slice_hamiltonian(proc, slice.amplitudes));
        return L;
      };
      if (opts.method == PropagationMethod::DenseExponential) {
        const auto E = cached(cache, slice_key('L', fingerprint, slice.duration, slice.amplitudes), [&] {
          ComplexMatrix a = generator();
          a *= slice.duration;
          return matrix_exponential(a, squarings_allowed(opts.max_substeps));
        });
        v = matvec(*E, v);
      } else {
        v = apply_exponential(generator(), slice.duration, v, opts);
      }
    }
    out = unvectorize(v, d);
  }

  try {
    return project_to_density_matrix(out, 1e-6);
  } catch (const ValidationError& e) {
    double violation = e.magnitude();
    if (e.kind() == ValidationError::Kind::Trace) violation = std::abs(violation - 1.0);
    if (e.kind() == ValidationError::Kind::Positivity) violation = -violation;
    throw NumericalInstabilityError(violation, std::string("propagate: ") + e.what());
  }
}

}  // namespace pulsega
