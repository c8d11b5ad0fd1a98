#include <iostream>

#include "wtidx/cli.hpp"

int main(int argc, char** argv) { return wtidx::run_cli(argc, argv, std::cout, std::cerr); }
