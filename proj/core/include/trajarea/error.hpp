/* Copyright 2026 The trajarea Authors
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

#ifndef TRAJAREA_ERROR_HPP
#define TRAJAREA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trajarea {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV cell, JSON field, non-finite number).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A score outside the dataset bounds.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// An individual is missing at least one grid time.
class IncompletePanelError : public Error {
 public:
  explicit IncompletePanelError(const std::string& id)
      : Error("incomplete panel: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// Model or scenario document does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// An argument violates an operation precondition (bad index, bad degree...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Model grid and dataset grid differ.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Non-finite curve value encountered during integration.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Base for everything that prevents a model from being fitted.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Too few individuals for the requested number of groups.
class FitPreconditionError : public FitError {
 public:
  using FitError::FitError;
};

/// Every EM start collapsed.
class DegenerateFitError : public FitError {
 public:
  using FitError::FitError;
};

/// A group has no modally assigned members, so its APPA is undefined.
class EmptyGroupError : public Error {
 public:
  explicit EmptyGroupError(std::size_t group)
      : Error("empty group: " + std::to_string(group + 1)), group_(group) {}
  /// Zero-based group index.
  std::size_t group() const noexcept { return group_; }

 private:
  std::size_t group_;
};

/// File system failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trajarea

#endif  // TRAJAREA_ERROR_HPP
