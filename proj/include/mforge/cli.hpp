#ifndef MFORGE_CLI_HPP
#define MFORGE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace mforge::cli {

// Runs the mforge command line. args excludes the program name.
// Exit codes: 0 success, 1 runtime/convergence failure, 2 invalid input,
// 64 usage error. Reports go to out; structured diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mforge::cli

#endif
