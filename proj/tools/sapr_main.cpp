#include "sapr/cli.hpp"

int main(int argc, char** argv) { return sapr::cli_main(argc, argv); }
