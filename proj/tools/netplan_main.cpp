#include <iostream>

#include "pimmap/cli.hpp"

int main(int argc, char** argv) {
    return pimmap::run_cli(argc, argv, std::cout, std::cerr);
}
