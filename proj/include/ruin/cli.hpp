#pragma once

#include <string>
#include <vector>

namespace ruin::cli {

// Full command driver: args are argv[1:]. Returns the process exit code:
// 0 success, 1 condition/assertion failure, 2 usage or config error.
int run(const std::vector<std::string>& args);

}  // namespace ruin::cli
