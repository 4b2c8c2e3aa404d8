#include "cliquemc/cli.hpp"

int main(int argc, char** argv) { return cliquemc::run_cli(argc, argv); }
