#include "conespectra/cli.hpp"

int main(int argc, char** argv) { return conespectra::cli::main_entry(argc, argv); }
