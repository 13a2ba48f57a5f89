#include "obp/cli.hpp"

int main(int argc, char** argv) { return obp::cli::run(argc, argv); }
