#include "cheegerlab/cli.hpp"

int main(int argc, char** argv) { return cheegerlab::run_cli(argc, argv); }
