// Copyright 2026 The bosonbins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bosonbins {

enum class ErrorKind {
    invalid_dimension,
    domain,
    shape,
    invalid_partition,
    invalid_gram,
    numerical_failure,
    config,
    ingestion,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_dimension: return "invalid_dimension";
        case ErrorKind::domain: return "domain";
        case ErrorKind::shape: return "shape";
        case ErrorKind::invalid_partition: return "invalid_partition";
        case ErrorKind::invalid_gram: return "invalid_gram";
        case ErrorKind::numerical_failure: return "numerical_failure";
        case ErrorKind::config: return "config";
        case ErrorKind::ingestion: return "ingestion";
    }
    return "unknown";
}

/// Library-wide exception. The kind selects the CLI exit code.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace bosonbins
