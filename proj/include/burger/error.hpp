/*
 * Copyright 2026 The Burger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
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

namespace burger {

/// Base for all library errors. The message is prefixed with
/// "<module>::<operation>: " so callers can always tell where a failure
/// originated.
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& op, const std::string& what)
      : std::runtime_error(module + "::" + op + ": " + what), module_(module), op_(op) {}

  const std::string& module() const { return module_; }
  const std::string& operation() const { return op_; }

 private:
  std::string module_;
  std::string op_;
};

/// Caller supplied a value that violates a documented precondition.
/// The CLI maps these to exit status 1.
class ValidationError : public Error {
  using Error::Error;
};

class InvalidConfiguration : public ValidationError {
  using ValidationError::ValidationError;
};

class InvalidInput : public ValidationError {
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& module, const std::string& op, const std::string& what,
             std::size_t line)
      : ValidationError(module, op, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDataset : public ValidationError {
  using ValidationError::ValidationError;
};

/// Operation called in a state it cannot handle, e.g. a backward pass
/// without its forward cache.
class InvalidState : public Error {
  using Error::Error;
};

/// Numerical failure during optimization (NaN/Inf in gradients or parameters).
class NumericalError : public Error {
  using Error::Error;
};

}  // namespace burger
