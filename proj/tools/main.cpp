#include <iostream>

#include "curvedmag/cli.hpp"

int main(int argc, char** argv) { return curvedmag::cli::run(argc, argv, std::cout, std::cerr); }
