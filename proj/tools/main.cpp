#include <iostream>

#include "ersketch/cli.hpp"

int main(int argc, char** argv) { return ersketch::run_cli(argc, argv, std::cout, std::cerr); }
