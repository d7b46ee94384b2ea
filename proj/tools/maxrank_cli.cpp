#include <iostream>
#include <string>
#include <vector>

#include "maxrank/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return maxrank::cli::run(args, std::cout, std::cerr);
}
