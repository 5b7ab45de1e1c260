#pragma once

#include <iosfwd>

namespace posboot::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,   // usage or parse failure
    kDomain = 3,  // well-formed input the analysis cannot handle
};

/// Entry point shared by the binary and the tests. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace posboot::cli
