#include "blr/cli.hpp"

int main(int argc, char** argv) { return blr::cli_main(argc, argv); }
