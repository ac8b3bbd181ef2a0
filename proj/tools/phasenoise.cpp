#include <iostream>

#include "phasenoise/cli.hpp"

int main(int argc, char** argv) { return phasenoise::cli::main(argc, argv, std::cout, std::cerr); }
