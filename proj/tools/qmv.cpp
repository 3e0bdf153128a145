#include "qmv/cli.hpp"

int main(int argc, char** argv) { return qmv::cli::run(argc, argv); }
