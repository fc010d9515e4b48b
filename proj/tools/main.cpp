#include "netpress/cli.hpp"

int main(int argc, char** argv) { return netpress::cli_main(argc, argv); }
