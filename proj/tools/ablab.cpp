#include "ablab/cli.hpp"

int main(int argc, char** argv) { return ablab::cli_main(argc, argv); }
