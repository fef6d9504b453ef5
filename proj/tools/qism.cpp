#include <iostream>

#include "qism/cli.hpp"

int main(int argc, char** argv) { return qism::run_cli(argc, argv, std::cout, std::cerr); }
