#include <iostream>

#include "contactlab/cli.hpp"

int main(int argc, char** argv) { return contactlab::run_command(argc, argv, std::cout, std::cerr); }
