#pragma once

#include <string>
#include <vector>

namespace qtrees::cli {

struct RunResult {
    int exit_code = 0; // 0 computed, 1 checked property failed, 2 input error
    std::string out;
};

/** Full command dispatch; args exclude the binary name. */
RunResult run(const std::vector<std::string>& args);

} // namespace qtrees::cli
