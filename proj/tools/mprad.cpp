#include "mprad/cli.hpp"

int main(int argc, char** argv) { return mprad::cli::main(argc, argv); }
