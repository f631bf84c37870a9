#include "amulab/cli.hpp"

int main(int argc, char** argv) { return amulab::cli::run(argc, argv); }
