#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace argcascade::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationFailure = 1, // bad input, bad flags, failed expectations
    kIoFailure = 2,         // filesystem or network trouble
};

/// Runs one command line; args[0] is the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace argcascade::cli
