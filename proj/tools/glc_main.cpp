#include <iostream>

#include "cli_commands.hpp"

int main(int argc, char** argv) { return glc::cli::run(argc, argv, std::cout, std::cerr); }
