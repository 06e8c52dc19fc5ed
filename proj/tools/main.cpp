#include <iostream>

#include "rsgraph/cli.hpp"

int main(int argc, char** argv) { return rsg::run_cli(argc, argv, std::cout, std::cerr); }
