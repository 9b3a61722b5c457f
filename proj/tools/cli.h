// Copyright 2026 The shadowframe Authors
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

#ifndef SHADOWFRAME_TOOLS_CLI_H
#define SHADOWFRAME_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace shadowframe::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kValidationFailure = 2,
    kDomainError = 3,
    kIoError = 4,
};

/// Default directory for output files when --out is not given.
inline constexpr const char *kOutputDirEnv = "SHADOWFRAME_OUTPUT_DIR";

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace shadowframe::cli

#endif
