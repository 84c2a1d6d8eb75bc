#include "corcon/cli.hpp"

int main(int argc, char** argv) { return corcon::cli_main(argc, argv); }
