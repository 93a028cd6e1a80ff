// Copyright 2026 The rqp Authors
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

#ifndef RQP_TOOLS_CLI_H_
#define RQP_TOOLS_CLI_H_

// Command-line front end: analytic, count, run and sweep subcommands.
//
// Exit codes: 0 ok or accepted, 1 verification mismatch, 2 usage or
// configuration error, 3 enumeration above bound, 4 protocol aborted,
// 5 sweep cell failed.

#include <ostream>
#include <string>
#include <vector>

namespace rqp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBound = 3;
inline constexpr int kExitAborted = 4;
inline constexpr int kExitSweepFail = 5;

// `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace rqp::cli

#endif  // RQP_TOOLS_CLI_H_
