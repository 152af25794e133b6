#include <iostream>

#include "lamarck/expcli.hpp"

int main(int argc, char** argv) { return lamarck::cli_main(argc, argv, std::cout, std::cerr); }
