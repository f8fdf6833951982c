#include "polymerlab/cli.hpp"

int main(int argc, char** argv) { return polymerlab::run(argc, argv); }
