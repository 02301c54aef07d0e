#include "qsc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qsc::run_cli(argc, argv, std::cout, std::cerr); }
