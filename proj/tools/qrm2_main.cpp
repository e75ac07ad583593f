#include "qrm2/cli.hpp"

int main(int argc, char** argv) { return qrm2::cli::run(argc, argv); }
