#pragma once

// Command-line front end: simulate, validate, qmatrix, twopoint, plot-data.
// Exit codes: 0 success, 2 configuration error, 3 simulation/validation
// failure, 4 I/O error.

namespace simplex_langevin::cli {

int run(int argc, const char* const* argv);

}  // namespace simplex_langevin::cli
