#include <iostream>

#include "pcurv/cli.hpp"

int main(int argc, char** argv) { return pcurv::cli::run(argc, argv, std::cout, std::cerr); }
