#include "bma/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return bma::cli::run(argc, argv, std::cout, std::cerr); }
