// Copyright 2026 The rqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RQP_ERRORS_H_
#define RQP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rqp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Configuration invariants (geometry, code sizes, grids) do not hold.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration was requested above the configured size bound.
class EnumerationBoundError : public Error {
 public:
  EnumerationBoundError(int size, int bound)
      : Error("enumeration of " + std::to_string(size) +
              " channels exceeds bound " + std::to_string(bound)),
        size_(size),
        bound_(bound) {}
  int size() const { return size_; }
  int bound() const { return bound_; }

 private:
  int size_;
  int bound_;
};

// Fired outcomes admit no valid block string; the transcript is corrupted
// or the sender cheated.
class InconsistentEvidenceError : public Error {
 public:
  InconsistentEvidenceError() : Error("inconsistent evidence") {}
};

}  // namespace rqp

#endif  // RQP_ERRORS_H_
