#include "vai/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return vai::cli::run(argc, argv, std::cout, std::cerr); }
