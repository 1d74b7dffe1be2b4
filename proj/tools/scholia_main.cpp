#include <iostream>

#include "scholia/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return scholia::cli::dispatch(args, std::cout, std::cerr);
}
