#include "cli_app.hpp"

int main(int argc, char** argv) { return simplex_langevin::cli::run(argc, argv); }
