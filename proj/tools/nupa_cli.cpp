#include "nupa/harness.hpp"

int main(int argc, char** argv) { return nupa::harness::cli(argc, argv); }
