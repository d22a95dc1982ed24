#include "cbpa/cli.hpp"

int main(int argc, char** argv) { return cbpa::cli::main(argc, argv); }
