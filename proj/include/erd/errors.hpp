// Copyright 2026 The ERD Authors
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

namespace erd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on register width or matrix dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A bath slot referenced by an operator has no dense binding.
class UnboundBathSlot : public Error {
 public:
  explicit UnboundBathSlot(const std::string& slot)
      : Error("unbound bath slot '" + slot + "'"), slot_(slot) {}
  const std::string& slot() const noexcept { return slot_; }

 private:
  std::string slot_;
};

/// Principal logarithm requested for a unitary with an eigenphase at +-pi.
class BranchCutError : public Error {
 public:
  explicit BranchCutError(double phase)
      : Error("eigenphase " + std::to_string(phase) +
              " lies on the principal-log branch cut"),
        phase_(phase) {}
  double phase() const noexcept { return phase_; }

 private:
  double phase_;
};

/// An operator does not preserve the code subspace.
class LeakageError : public Error {
 public:
  explicit LeakageError(double off_block_norm)
      : Error("operator leaks out of the code subspace (off-block norm " +
              std::to_string(off_block_norm) + ")"),
        off_block_norm_(off_block_norm) {}
  double off_block_norm() const noexcept { return off_block_norm_; }

 private:
  double off_block_norm_;
};

}  // namespace erd
