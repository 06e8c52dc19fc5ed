#pragma once

#include <ostream>

namespace rsg {

// Exit codes: 0 success, 1 usage or I/O error, 2 verification failure
// (witness serialized to stdout), 3 budget exceeded.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rsg
