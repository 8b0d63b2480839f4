#include "hbinterp/cli.hpp"

int main(int argc, char** argv) { return hbinterp::cli::run(argc, argv); }
