#pragma once

#include <iosfwd>

namespace manin::cli {

enum ExitCode : int { kAllPass = 0, kCheckFailed = 1, kInputError = 2, kInternalError = 3 };

/// Entry point of the manin tool, with injectable streams for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace manin::cli
