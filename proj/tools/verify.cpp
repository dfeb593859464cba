#include "carleson/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return carleson::cli::main(argc, argv, std::cout, std::cerr); }
