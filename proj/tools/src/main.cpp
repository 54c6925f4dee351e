#include <iostream>

#include "qtt_cli/cli.hpp"

int main(int argc, char** argv) { return qtt::cli::run(argc, argv, std::cout, std::cerr); }
