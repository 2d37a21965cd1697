#pragma once

#include <iosfwd>

namespace evercommit {

/// Entry point behind the `evercommit` executable. Returns the exit code:
/// 0 success, 1 protocol rejection, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace evercommit
