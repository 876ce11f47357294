#include <iostream>

#include "qdiff/cli.hpp"

int main(int argc, char** argv) { return qdiff::cli::run(argc, argv, std::cout, std::cerr); }
