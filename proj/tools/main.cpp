#include "stf/cli.hpp"

int main(int argc, char** argv) { return stf::run(argc, argv); }
