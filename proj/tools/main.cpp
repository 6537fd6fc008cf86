#include "barytope/cli.hpp"

int main(int argc, char** argv) { return bary::run(argc, argv); }
