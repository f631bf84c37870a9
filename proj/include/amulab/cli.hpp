#pragma once

#include <string>
#include <vector>

namespace amulab::cli {

// Batch entry point behind the amulab binary. Exit codes:
// 0 success, 1 criterion/assertion failure, 2 usage or validation error,
// 3 IO failure.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace amulab::cli
