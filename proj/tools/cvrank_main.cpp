#include <iostream>

#include "cvrank/cli.hpp"

int main(int argc, char** argv) {
    return cvrank::run_cli(argc, argv, std::cout, std::cerr);
}
