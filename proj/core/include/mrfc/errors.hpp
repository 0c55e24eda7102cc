// Copyright 2026 The MRFC Authors
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

#ifndef MRFC_ERRORS_HPP_
#define MRFC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mrfc {

// Exit-code classes used by the command-line tool. Every exception thrown by
// the library derives from Error and carries one of these.
enum class ErrorKind {
  kConvergence = 1,  // inner/outer iteration caps, line-search stall
  kInvalidInput = 2,  // parse errors, bad parameters, infeasible instances
  kInvariant = 3,  // domain errors and broken internal invariants
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& what)
      : Error(ErrorKind::kInvalidInput, what) {}
};

// A point left the strict interior, or a quantity that must be positive
// (Hessian diagonal, splitting diagonal) was not.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kInvariant, what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(ErrorKind::kConvergence, what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorKind::kInvariant, what) {}
};

}  // namespace mrfc

#endif  // MRFC_ERRORS_HPP_
