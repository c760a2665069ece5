// Copyright 2026 The outmat Authors.
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

namespace outmat {

// Operand dimensions do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Arithmetic outside the domain of the operation, e.g. inverting zero.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Secret-key material that would make a disguise matrix singular or
// mismatched with the inputs.
class KeyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid configuration: non-prime modulus, bad float model, bad dims.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation not defined for the selected backend or verification mode.
class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed matrix, key, or config file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace outmat
