#include "heatchroma/cli.hpp"

int main(int argc, char** argv) { return heatchroma::cli::run(argc, argv); }
