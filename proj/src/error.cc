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

#include "evoleague/error.h"

namespace evoleague {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid_input";
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kNotFound: return "not_found";
    case ErrorKind::kState: return "state";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kMigration: return "migration";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

void Fail(ErrorKind kind, const std::string& message) {
  throw LeagueError(kind, message);
}

}  // namespace evoleague
