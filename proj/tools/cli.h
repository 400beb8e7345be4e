// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_TOOLS_CLI_H_
#define INML_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace inml::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one invocation. args[0] is the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace inml::cli

#endif  // INML_TOOLS_CLI_H_
