#include <iostream>

#include "acmdp/cli.hpp"

int main(int argc, char** argv) { return acmdp::run_cli(argc, argv, std::cout, std::cerr); }
