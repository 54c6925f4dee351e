#pragma once

#include <iosfwd>

namespace qtt::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Entry point shared by main() and the in-process tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtt::cli
