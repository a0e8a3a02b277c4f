#pragma once

#include <iosfwd>

namespace bma::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 2, kComputationError = 3 };

/// Entry point of the bma tool. JSON goes to `out` unless --out is given;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bma::cli
