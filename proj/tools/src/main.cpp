#include "cli.hpp"

int main(int argc, char** argv) { return jcdm::cli::run(argc, argv); }
