#include "cli.hpp"

int main(int argc, char** argv) { return ilab::cli::dispatch(argc, argv); }
