#include <iostream>

#include "tagreuse/cli.hpp"

int main(int argc, char** argv) { return tagreuse::run_cli(argc, argv, std::cout, std::cerr); }
