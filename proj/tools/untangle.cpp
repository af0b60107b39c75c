#include "untangle/cli.hpp"

int main(int argc, char** argv) { return untangle::run_cli(argc, argv); }
