#include <iostream>

#include "evo/cli.hpp"

int main(int argc, char** argv) { return evo::run(argc, argv, std::cout, std::cerr); }
