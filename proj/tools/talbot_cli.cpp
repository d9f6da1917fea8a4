#include <iostream>

#include "talbot/cli.hpp"

int main(int argc, char** argv) { return talbot::cli::run(argc, argv, std::cout, std::cerr); }
