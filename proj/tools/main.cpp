#include <string>
#include <vector>

#include "ruin/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ruin::cli::run(args);
}
