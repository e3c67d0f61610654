#include "cavitytrap/cli.hpp"

int main(int argc, char** argv) { return cavitytrap::run_cli(argc, argv); }
