#include "levy/cli.hpp"

int main(int argc, char** argv) { return levy::cli_main(argc, argv); }
