// Copyright 2026 The EvoLeague Authors
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

#ifndef EVOLEAGUE_ERROR_H_
#define EVOLEAGUE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace evoleague {

enum class ErrorKind {
  kInvalidInput,
  kCapacity,
  kNotFound,
  kState,
  kNumeric,
  kConfig,
  kMigration,
  kParse,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported with this exception; `kind()` lets the CLI
// map them onto exit codes and machine-readable diagnostics.
class LeagueError : public std::runtime_error {
 public:
  LeagueError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& message);

}  // namespace evoleague

#endif  // EVOLEAGUE_ERROR_H_
