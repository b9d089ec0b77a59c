#include "sand/cli.hpp"

int main(int argc, char** argv) { return sand::run_cli(argc, argv); }
