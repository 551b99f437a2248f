#include <iostream>

#include "orbiqrr/cli.hpp"

int main(int argc, char** argv) {
    return orbiqrr::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
