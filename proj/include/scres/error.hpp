// Copyright 2026 The scres Authors.
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

namespace scres {

// Every failure the library reports derives from Error. The CLI maps the
// category onto its exit code.
enum class ErrorCategory { kInput = 1, kFit = 2, kConfig = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::kInput, what) {}
};

/// Result would overflow the floating-point range.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorCategory::kInput, what) {}
};

/// Quadrature or iteration failed to produce a trustworthy number.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCategory::kFit, what) {}
};

/// Inputs are individually valid but physically inconsistent together.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(ErrorCategory::kInput, what) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(ErrorCategory::kFit, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCategory::kInput, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::kConfig, what) {}
};

}  // namespace scres
