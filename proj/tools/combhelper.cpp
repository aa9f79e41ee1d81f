#include <iostream>

#include "combhelper/cli.hpp"

int main(int argc, char** argv) { return combhelper::cli::dispatch(argc, argv, std::cout, std::cerr); }
