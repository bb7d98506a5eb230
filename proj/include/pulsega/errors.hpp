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

#include <stdexcept>
#include <string>

namespace pulsega {

/// A caller violated a documented precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix failed one of the density-matrix invariants.
class ValidationError : public std::runtime_error {
 public:
  enum class Kind { NotFinite, Hermiticity, Trace, Positivity };

  ValidationError(Kind kind, double magnitude, const std::string& what)
      : std::runtime_error(what), kind_(kind), magnitude_(magnitude) {}

  Kind kind() const noexcept { return kind_; }
  /// The measured quantity that broke the invariant: the Hermiticity
  /// defect, the trace itself, or the smallest eigenvalue.
  double magnitude() const noexcept { return magnitude_; }

 private:
  Kind kind_;
  double magnitude_;
};

/// Time evolution produced a state outside the accepted tolerance.
class NumericalInstabilityError : public std::runtime_error {
 public:
  NumericalInstabilityError(double violation, const std::string& what)
      : std::runtime_error(what), violation_(violation) {}
  double violation() const noexcept { return violation_; }

 private:
  double violation_;
};

/// GA state machine misuse, e.g. selecting from unevaluated individuals.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pulsega
