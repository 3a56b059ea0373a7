#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ofdma::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kInfeasible = 2,
    kValidation = 3,
    kLimit = 4,
};

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ofdma::cli
