#include "wfl/cli.hpp"

int main(int argc, char** argv) { return wfl::cli::main_entry(argc, argv); }
