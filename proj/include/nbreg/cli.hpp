#pragma once

#include <iosfwd>

namespace nbreg {

// Entry point shared by the binary and the integration tests.
// Exit codes: 0 success, 1 input error, 2 fit did not converge.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nbreg
