#include <iostream>

#include "obring/cli.hpp"

int main(int argc, char** argv) { return obring::cli::main_entry(argc, argv, std::cout, std::cerr); }
