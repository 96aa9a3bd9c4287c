#include "apc/cli.hpp"

int main(int argc, char** argv) { return apc::cli::run(argc, argv); }
