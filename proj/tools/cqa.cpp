#include <iostream>

#include "cqa/cli.hpp"

int main(int argc, char** argv) { return cqa::cli::run(argc, argv, std::cout, std::cerr); }
