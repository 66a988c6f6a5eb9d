#pragma once

// Command-line frontend: subcommands over every module, shared flags, exit codes.

#include <ostream>

namespace qspec {

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitBudget = 3, kExitInconclusive = 4 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qspec
