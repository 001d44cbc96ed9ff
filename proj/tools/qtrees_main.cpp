#include <cstdio>
#include <string>
#include <vector>

#include "qtrees/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    qtrees::cli::RunResult r = qtrees::cli::run(args);
    std::fputs(r.out.c_str(), stdout);
    return r.exit_code;
}
