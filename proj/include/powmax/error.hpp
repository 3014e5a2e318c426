// Copyright 2026 The powmax Authors.
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

#include <cmath>
#include <stdexcept>
#include <string>

namespace powmax {

/// Base of every error raised by the library. The CLI maps these to exit
/// code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The implicit norming equation has no root on the increasing branch.
class NoRootError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Incompatible combination of options (scheme vs. power index, etc).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Constants that would be non-positive or otherwise unusable.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A t != 2 coefficient requested at t == 2, or the converse.
class BranchError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

/// A diagnostic cannot be computed from the supplied grid.
class DiagnosticsError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_not_nan(double v, const char* what) {
  if (std::isnan(v)) throw DomainError(std::string(what) + ": NaN argument");
}

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + ": argument must be finite, got " +
                      std::to_string(v));
  }
}

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite and > 0, got " +
                      std::to_string(v));
  }
}

}  // namespace detail
}  // namespace powmax
