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

#ifndef EVOLEAGUE_CLI_H_
#define EVOLEAGUE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace evoleague {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Entry point of the command-line tool. `args` excludes the program name.
// Documents go to `out`; failures are reported as one JSON object on `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evoleague

#endif  // EVOLEAGUE_CLI_H_
