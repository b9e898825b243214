#include "dgeo/cli.hpp"

int main(int argc, char** argv) { return dgeo::cli::run(argc, argv); }
