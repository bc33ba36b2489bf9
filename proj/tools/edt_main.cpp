#include <iostream>

#include "edt/cli.hpp"

int main(int argc, char** argv) { return edt::cli::run(argc, argv, std::cout, std::cerr); }
