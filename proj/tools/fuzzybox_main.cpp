#include "fuzzybox/cli.hpp"

int main(int argc, char** argv) { return fuzzybox::cli::run(argc, argv); }
