// Copyright 2026 The seclabel Authors.
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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace seclabel {

enum class ErrorKind {
  kInvalidParameter,  // a numeric or option argument violates a precondition
  kInvalidInput,      // well-formed input that the operation cannot accept
  kMalformedInput,    // a file line that does not parse
  kIobViolation,      // an I tag without a matching B/I predecessor
  kIo,                // missing or unwritable file
  kCorruptModel,
  kVersionMismatch,
};

const char* ToString(ErrorKind kind);

// All library failures are reported as Error. Parse errors carry the
// 1-based line number of the offending input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const { return kind_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace seclabel
