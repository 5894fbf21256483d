// Copyright 2026 The ssagen Authors.
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

#ifndef SSA_DIAGNOSTICS_HPP_
#define SSA_DIAGNOSTICS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssa {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes (JSON syntax, checkpoint framing).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t byte_position)
      : Error(what), byte_position_(byte_position) {}
  size_t byte_position() const { return byte_position_; }

 private:
  size_t byte_position_;
};

// Well-formed input that violates a data contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during training (non-finite loss or gradient).
class TrainingError : public Error {
 public:
  using Error::Error;
};

enum class DiagCode {
  kSpanSnapped,
  kMultiFragmentCollapsed,
  kMalformedGroup,
  kTruncatedGroup,
  kMissingEos,
  kDuplicateTuple,
  kLengthCapReached,
};

std::string_view DiagCodeName(DiagCode code);

struct Diagnostic {
  DiagCode code;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace ssa

#endif  // SSA_DIAGNOSTICS_HPP_
