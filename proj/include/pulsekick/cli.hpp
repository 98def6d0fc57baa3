#pragma once

#include <iosfwd>

namespace pulsekick::cli {

// Full command-line front end, factored out of main() so tests can drive it
// in-process. Writes results to `out` (unless the invocation routes them to
// a file) and diagnostics to `err`. Returns the process exit code:
// 0 success, 1 numeric/runtime failure, 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace pulsekick::cli
