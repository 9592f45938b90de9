#include <iostream>

#include "wv/cli.hpp"

int main(int argc, char** argv) { return wv::cli_main(argc, argv, std::cout, std::cerr); }
