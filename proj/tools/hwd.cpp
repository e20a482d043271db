#include "hwd/cli.hpp"

int main(int argc, char** argv) { return hwd::cli::run(argc, argv); }
