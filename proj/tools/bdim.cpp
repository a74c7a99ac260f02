#include <iostream>

#include "bdim/cli/app.hpp"

int main(int argc, char** argv) { return bdim::cli::run(argc, argv, std::cout, std::cerr); }
