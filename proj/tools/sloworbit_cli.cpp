#include "sloworbit/cli.hpp"

int main(int argc, char** argv) { return sloworbit::run_command(argc, argv); }
