#include <iostream>

#include "gaussgap/cli.hpp"

int main(int argc, char** argv) { return gaussgap::run_cli(argc, argv, std::cout, std::cerr); }
