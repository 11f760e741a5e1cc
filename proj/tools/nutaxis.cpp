#include "nutaxis/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nutaxis::run_cli(argc, argv, std::cout, std::cerr); }
