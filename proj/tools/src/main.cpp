#include <iostream>

#include "lagsw_cli/commands.hpp"

int main(int argc, char** argv) { return lagsw::cli::run_cli(argc, argv, std::cout, std::cerr); }
