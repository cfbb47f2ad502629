#include <iostream>

#include "syn/cli.hpp"

int main(int argc, char** argv) { return syn::dispatch(argc, argv, std::cout, std::cerr); }
