#include "posterforge/cli/cli.hpp"

int main(int argc, char** argv) { return posterforge::cli::run(argc, argv); }
