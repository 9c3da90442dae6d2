#include "commands.hpp"

int main(int argc, char** argv) { return lltorus::cli::run(argc, argv); }
