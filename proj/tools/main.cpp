#include "affcyl/cli.hpp"

int main(int argc, char** argv) { return affcyl::run_cli(argc, argv); }
