#include "ghznet/harness.hpp"

int main(int argc, char** argv) { return ghznet::cli_main(argc, argv); }
