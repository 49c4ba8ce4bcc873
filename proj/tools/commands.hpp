#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hbs/error.hpp"

namespace hbs::cli {

enum ExitCode { kOk = 0, kParse = 2, kGridMismatch = 3, kSolver = 4, kProtocol = 5 };

/// Exit status for a pipeline error.
int exit_code_for(const Error& e);

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbs::cli
