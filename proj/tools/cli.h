/*
 * Copyright 2026 The dynbps Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DYNBPS_TOOLS_CLI_H_
#define DYNBPS_TOOLS_CLI_H_

#include <ostream>

namespace dynbps::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kUsage = 2,
  kInputData = 3,
  kNumerical = 4,
  kUnwritableOutput = 5,
};

// Runs the dynbps command line. Data goes to `out` unless --out is given;
// diagnostics go to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dynbps::cli

#endif  // DYNBPS_TOOLS_CLI_H_
