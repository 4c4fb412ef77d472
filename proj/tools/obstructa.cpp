#include <iostream>
#include <vector>

#include "obstructa/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return obstructa::run_cli(args, std::cout, std::cerr);
}
