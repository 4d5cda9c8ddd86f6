#include <iostream>

#include "flexdse/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flexdse::run_cli(args, std::cout, std::cerr);
}
