#include "padic_walk/cli/commands.hpp"

int main(int argc, char** argv) { return padic::cli::run(argc, argv); }
