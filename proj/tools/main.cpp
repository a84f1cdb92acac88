#include "dtnum/cli.hpp"

int main(int argc, char** argv) { return dtnum::cli::run(argc, argv); }
