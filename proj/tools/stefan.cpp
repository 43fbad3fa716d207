#include <iostream>

#include "stefan/cli.hpp"

int main(int argc, char** argv) { return stefan::cli::run(argc, argv, std::cout, std::cerr); }
