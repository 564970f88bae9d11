#include "interface_lab/cli.hpp"

int main(int argc, char** argv) { return interface_lab::cli::main(argc, argv); }
