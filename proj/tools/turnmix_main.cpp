#include "turnmix/cli.hpp"

int main(int argc, char** argv) { return turnmix::run_cli(argc, argv); }
