#pragma once

#include <iosfwd>

namespace koreg::cli {

enum ExitCode : int { Ok = 0, UsageError = 1, NumericalFailure = 2 };

/// Entry point of the `koreg` tool with injectable streams; `in` feeds the
/// interactive threshold prompt.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace koreg::cli
