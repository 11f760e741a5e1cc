#ifndef NUTAXIS_CLI_HPP
#define NUTAXIS_CLI_HPP

#include <iosfwd>

namespace nutaxis {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitSimulation = 2,
    kExitAudit = 3,
};

/// Entry point of the `nutaxis` tool. Never throws; every failure maps to an exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nutaxis

#endif  // NUTAXIS_CLI_HPP
