#include <iostream>
#include <string>
#include <vector>

#include "sebkit/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return sebkit::run_command(args, std::cout, std::cerr);
}
