#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace besicover {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

// Runs one subcommand; args exclude the program name. Reports go to `out`
// (or the --out file), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace besicover
