#include "ncspectral_cli/cli.hpp"

int main(int argc, char** argv) { return ncspectral::cli::run_main(argc, argv); }
