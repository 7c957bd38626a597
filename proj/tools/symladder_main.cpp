#include <iostream>

#include "symladder/cli.hpp"

int main(int argc, char **argv) { return symladder::cli_main(argc, argv, std::cout, std::cerr); }
