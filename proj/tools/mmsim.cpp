#include "mmsim/cli.hpp"

int main(int argc, char** argv) { return mmsim::run_cli(argc, argv); }
