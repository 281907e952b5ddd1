#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace softedge::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kValidationError = 2;
inline constexpr int kInternalError = 3;

/// Runs the command line (without argv[0]). Normal output goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace softedge::cli
