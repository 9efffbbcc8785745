#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gradalg::cli {

enum Exit : int { kOk = 0, kFalse = 1, kError = 2, kUsage = 3 };

// Runs one subcommand; args exclude the program name. Reports go to out,
// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string schema_help();

}  // namespace gradalg::cli
