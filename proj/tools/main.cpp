#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return static_cast<int>(wz::cli::run(argc, argv, std::cout, std::cerr)); }
