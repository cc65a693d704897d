#include <iostream>

#include "odokit/cli.hpp"

int main(int argc, char** argv) { return odokit::run_cli(argc, argv, std::cout, std::cerr); }
