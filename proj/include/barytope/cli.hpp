#pragma once

#include <string>
#include <vector>

namespace bary {

/// Command-line entry point. args excludes the program name, e.g.
/// {"sweep", "--body", "k", "--n-list", "64,128", "--samples", "1000"}.
/// Exit codes: 0 success, 1 input/usage error, 2 convergence error,
/// 3 statistically indeterminate sign (sign-test commands only).
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

} // namespace bary
