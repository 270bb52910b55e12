#include "strtour/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return strtour::cli::run(argc, argv, std::cout, std::cerr); }
