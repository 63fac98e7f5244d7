#include <iostream>

#include "polyinv/cli.hpp"

int main(int argc, char** argv) { return polyinv::cli::run(argc, argv, std::cout, std::cerr); }
