#include <iostream>

#include "lensdyn/cli.hpp"

int main(int argc, char** argv) { return lensdyn::cli::run_cli(argc, argv, std::cout, std::cerr); }
