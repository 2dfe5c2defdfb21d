// Copyright 2026 The kldist Authors
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
//

#ifndef KLDIST_ERRORS_HPP_
#define KLDIST_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kldist {

// Base class of every error raised by the library. The CLI maps any Error to
// exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A value object could not be constructed from the given data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Vectors that must share a dimension do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Named parameters do not match what a formula or config requires.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// The operation does not apply to the given estimator.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

// A search or enumeration would exceed its configured cap.
class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& what, double requested, double cap)
      : Error(what), requested_(requested), cap_(cap) {}

  double requested() const { return requested_; }
  double cap() const { return cap_; }

 private:
  double requested_;
  double cap_;
};

}  // namespace kldist

#endif  // KLDIST_ERRORS_HPP_
