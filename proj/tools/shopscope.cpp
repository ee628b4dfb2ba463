#include "commands.hpp"

int main(int argc, char** argv) { return shopscope::cli::run_cli(argc, argv); }
