// Copyright 2026 The privfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// privfunnel command dispatch: mi, optimize, sweep and compare.
//
// Exit codes: 0 success (optimize: converged), 2 optimize stopped at
// max_iters, 1 any error. Precedence for the seed: --seed, then the
// PRIVFUNNEL_SEED environment variable, then the config.

#ifndef PRIVFUNNEL_CLI_COMMANDS_H_
#define PRIVFUNNEL_CLI_COMMANDS_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"

namespace privfunnel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxIters = 2;

// Writes to a sibling temp file, then renames over `path`.
absl::Status WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

// args[0] is the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace privfunnel::cli

#endif  // PRIVFUNNEL_CLI_COMMANDS_H_
