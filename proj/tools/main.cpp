#include "cli.hpp"

int main(int argc, char** argv) { return telliptic::cli::run(argc, argv); }
