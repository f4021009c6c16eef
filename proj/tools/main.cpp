#include "archprobe/experiments.hpp"

int main(int argc, char** argv) { return archprobe::cli_main(argc, argv); }
