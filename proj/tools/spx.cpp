#include "cli/commands.hpp"

int main(int argc, char** argv) { return spx::cli::run(argc, argv); }
