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

#include "seclabel/error.hpp"

namespace seclabel {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return "invalid parameter";
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kMalformedInput: return "malformed input";
    case ErrorKind::kIobViolation: return "IOB violation";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kCorruptModel: return "corrupt model";
    case ErrorKind::kVersionMismatch: return "version mismatch";
  }
  return "error";
}

static std::string Decorate(const std::string& message, std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(Decorate(message, line)), kind_(kind), line_(line) {}

}  // namespace seclabel
