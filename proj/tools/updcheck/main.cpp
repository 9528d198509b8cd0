#include <iostream>

#include "updcheck/cli/cli.hpp"

int main(int argc, char** argv) { return updcheck::cli::run(argc, argv, std::cout, std::cerr); }
