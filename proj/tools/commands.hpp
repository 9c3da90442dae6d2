#pragma once

namespace lltorus::cli {

// Parses the command line, runs one subcommand and returns the exit status.
// Errors are written to stderr as one line of JSON.
int run(int argc, char** argv);

}  // namespace lltorus::cli
