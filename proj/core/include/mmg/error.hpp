/**
 * Copyright 2026 The mmgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace mmg {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched layouts, matrix sizes or mode labels.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-Hermitian, non-symplectic, non-contractive or otherwise unphysical
/// numerical input or result.
class UnphysicalState : public Error {
 public:
  using Error::Error;
};

/// A configured safety limit (subset size, photon cutoff) was exceeded.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace mmg
