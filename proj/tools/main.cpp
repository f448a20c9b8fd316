#include "kuramoto/experiment.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return kuramoto::cli_main(argc, argv, std::cout, std::cerr);
}
