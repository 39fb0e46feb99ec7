// Copyright 2026 The qchan Authors
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

namespace qchan {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Operand dimensions are inconsistent with each other. */
class DimensionError : public Error {
 public:
  using Error::Error;
};

/** A matrix does not have the required shape or structure
 * (square, Hermitian, column vector, ...). */
class ShapeError : public Error {
 public:
  using Error::Error;
};

/** An argument lies outside the mathematical domain of an operation
 * (not a density matrix, not normalised, index out of range). */
class DomainError : public Error {
 public:
  using Error::Error;
};

/** A Hermitian matrix has an eigenvalue below the negative tolerance. */
class NotPsdError : public DomainError {
 public:
  using DomainError::DomainError;
};

/** The requested register is too large for dense simulation. */
class ResourceError : public Error {
 public:
  using Error::Error;
};

/** A circuit cannot be legalised for a coupling map. */
class RoutingError : public Error {
 public:
  using Error::Error;
};

/** Wrong number of arguments (e.g. not nine basis outputs). */
class ArityError : public Error {
 public:
  using Error::Error;
};

/** Malformed serialised data or experiment configuration. */
class FormatError : public Error {
 public:
  using Error::Error;
};

/** Post-selection onto the qutrit subspace kept no probability weight. */
class DegenerateProjectionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/** A tomography record lacks a measurement setting. */
class MissingSettingError : public Error {
 public:
  using Error::Error;
};

}  // namespace qchan
