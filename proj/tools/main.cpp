#include "zerolab/cli.hpp"

int main(int argc, char** argv) { return zerolab::cli::run(argc, argv); }
