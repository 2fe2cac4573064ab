#include <iostream>

#include "kpde/cli.hpp"

int main(int argc, char** argv) {
    return kpde::cli_main(argc, argv, std::cout, std::cerr);
}
