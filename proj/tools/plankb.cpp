#include <iostream>
#include <string>
#include <vector>

#include "plankb/cli.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return plankb::cli::dispatch(args, std::cout, std::cerr);
}
