#include "vps/cli.hpp"

int main(int argc, char** argv) { return vps::run_cli(argc, argv); }
