#include <iostream>

#include "cozeta/cli.hpp"

int main(int argc, char** argv) { return cozeta::run_cli(argc, argv, std::cout, std::cerr); }
