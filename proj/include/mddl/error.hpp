// Copyright 2026 The MDDL Authors
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

namespace mddl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not line up (d, n, s, vector lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside their documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// File missing, unreadable, unwritable or malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values produced while iterating.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace mddl
