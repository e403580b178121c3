#include "lballs/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lballs::run(argc, argv, std::cout, std::cerr); }
