#include <iostream>

#include "strongcert/cli.hpp"

int main(int argc, char** argv) { return strongcert::run_cli(argc, argv, std::cout, std::cerr); }
