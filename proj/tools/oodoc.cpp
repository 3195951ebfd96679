#include <iostream>

#include "oodoc/cli.hpp"

int main(int argc, char** argv) { return oodoc::cli::main(argc, argv, std::cout, std::cerr); }
