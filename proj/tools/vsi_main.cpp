#include "vsi/cli.hpp"

int main(int argc, char** argv) { return vsi::cli::run(argc, argv); }
