#pragma once

#include <string>
#include <vector>

namespace polybohr::cli {

inline constexpr const char* version = "0.1.0";

/// Exit codes: 0 success, 1 a check failed, 2 usage or input error.
/// argv[0] is the program name.
int run(const std::vector<std::string>& argv);

} // namespace polybohr::cli
