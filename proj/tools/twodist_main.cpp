#include <string>
#include <vector>

#include "twodist/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return twodist::run_cli(args);
}
