#include "dtlf/cli.hpp"

int main(int argc, char** argv) { return dtlf::cli::run_main(argc, argv); }
