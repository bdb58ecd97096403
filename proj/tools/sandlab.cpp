#include "sandlab/cli.hpp"

int main(int argc, char** argv) { return sandlab::cli_main(argc, argv); }
