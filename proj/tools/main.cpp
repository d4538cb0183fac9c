#include <iostream>

#include "graphscat/cli.hpp"

int main(int argc, char** argv) { return graphscat::main_entry(argc, argv, std::cout, std::cerr); }
