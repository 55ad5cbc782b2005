#include <iostream>

#include "manin_cli/cli.hpp"

int main(int argc, char** argv) { return manin::cli::run(argc, argv, std::cout, std::cerr); }
