// Copyright 2026 The pdsum Authors.
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

#ifndef PDSUM_ERROR_H_
#define PDSUM_ERROR_H_

#include <stdexcept>
#include <string>

namespace pdsum {

// Base of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed, missing or inconsistent input data (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, zero-norm vectors and similar numeric failures (exit code 4).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdsum

#endif  // PDSUM_ERROR_H_
