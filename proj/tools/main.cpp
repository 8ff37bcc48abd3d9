#include "chemoflux/cli.hpp"

int main(int argc, char** argv) { return chemoflux::cli_main(argc, argv); }
