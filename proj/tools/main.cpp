#include "pairsim/cli.hpp"

int main(int argc, char** argv) { return pairsim::cli::run(argc, argv); }
