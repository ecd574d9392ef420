#include "kpz1d/harness.hpp"

int main(int argc, char** argv) { return kpz1d::cli_main(argc, argv); }
