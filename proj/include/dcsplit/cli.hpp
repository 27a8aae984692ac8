#ifndef DCSPLIT_CLI_HPP
#define DCSPLIT_CLI_HPP

#include <string>
#include <vector>

namespace dcsplit {

/// Run the command-line tool on the given arguments (program name omitted).
/// Exit codes: 0 success, 1 validation failure, 2 infeasible/not regular,
/// 3 caps exceeded, 64 usage.
int run_cli(std::vector<std::string> args);

}  // namespace dcsplit

#endif
