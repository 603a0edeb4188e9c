// Copyright 2026 The voxsel Authors.
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

namespace voxsel {

// Base of every error raised by the library. The CLI maps subclasses of
// InputError to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors caused by the caller's inputs (files, shapes, values).
class InputError : public Error {
 public:
  using Error::Error;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

// Malformed file contents: bad magic, truncated payload, wrong size.
class FormatError : public InputError {
 public:
  using InputError::InputError;
};

// Well-formed file holding invalid values (NaN, out-of-range class id).
class DataError : public InputError {
 public:
  using InputError::InputError;
};

// Inputs that are individually valid but disagree with each other.
class ConsistencyError : public InputError {
 public:
  using InputError::InputError;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace voxsel
