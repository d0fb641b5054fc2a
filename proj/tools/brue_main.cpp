#include "brue/cli.hpp"

int main(int argc, char** argv) { return brue::cli_dispatch(argc, argv); }
