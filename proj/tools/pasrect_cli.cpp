#include "pasrect/cli.hpp"

int main(int argc, char** argv) { return pasrect::cli::cli_dispatch(argc, argv); }
