#include <iostream>

#include "ballmapper/cli.hpp"

int main(int argc, char** argv) { return ballmapper::run_cli(argc, argv, std::cout, std::cerr); }
