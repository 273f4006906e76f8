#include "intergat_cli/commands.hpp"

int main(int argc, char** argv) { return intergat::cli::run(argc, argv); }
