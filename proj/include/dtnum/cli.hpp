#pragma once

namespace dtnum::cli {

// Entry point of the dtnum command line tool; returns the process exit code.
int run(int argc, char** argv);

}  // namespace dtnum::cli
