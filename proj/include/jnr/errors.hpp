// Copyright 2026 The jnr Authors
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

namespace jnr {

/// Base class for every error caused by caller input (bad files, shapes,
/// preconditions). The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

class SymmetryError : public InputError {
 public:
  using InputError::InputError;
};

class SizeLimitError : public InputError {
 public:
  using InputError::InputError;
};

/// Inconsistent affine equalities in a feasibility problem.
class IllPosedError : public InputError {
 public:
  using InputError::InputError;
};

class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace jnr
