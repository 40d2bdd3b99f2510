#include "icx/harness.hpp"

int main(int argc, char** argv) { return icx::cli_main(argc, argv); }
