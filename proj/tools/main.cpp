#include "polya/cli.hpp"

int main(int argc, char** argv) { return polya::cli::run(argc, argv); }
