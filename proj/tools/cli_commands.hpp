#pragma once

#include <iosfwd>

namespace glc::cli {

/// Exit codes: 0 success, 2 invalid input or arguments, 1 runtime failure.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace glc::cli
