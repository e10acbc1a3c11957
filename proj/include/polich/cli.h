// Copyright 2026 The Polich Authors.
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


#ifndef POLICH_CLI_H_
#define POLICH_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace polich {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation or evaluation failure
inline constexpr int kExitUsage = 2;

// Runs one command. args excludes the program name. Results go to out (or
// the --output file), notices and errors to err.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string Version();

}  // namespace polich

#endif  // POLICH_CLI_H_
