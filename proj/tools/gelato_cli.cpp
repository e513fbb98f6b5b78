#include <iostream>

#include "gelato/cli.hpp"

int main(int argc, char** argv) { return gelato::run_cli(argc, argv, std::cout, std::cerr); }
