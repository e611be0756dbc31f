#include <iostream>

#include "prwalk/cli.hpp"

int main(int argc, char** argv) { return prwalk::cli::run(argc, argv, std::cout, std::cerr); }
