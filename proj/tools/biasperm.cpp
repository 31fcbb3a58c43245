#include "biasperm/cli.hpp"

int main(int argc, char** argv) { return biasperm::cli_main(argc, argv); }
