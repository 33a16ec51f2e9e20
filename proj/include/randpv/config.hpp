#pragma once

#include <string>
#include <vector>

#include "randpv/simulation.hpp"

namespace randpv {

/// Shortest decimal string that round-trips to the same double.
std::string shortest_double(double value);

/// Reads a flat "key = value" configuration file describing a simulation
/// grid. Scalar keys: m, s, n, reps, seed, lambda, p0, p1, model (z|t).
/// List keys (comma-separated): kinds, gamma, pi0, mu_min, mu_max.
/// mu_min and mu_max must have equal length and are zipped into pairs; the
/// grid is gamma (outer) x mu pair x pi0 (inner). Lines starting with '#'
/// and blank lines are skipped; unknown keys raise data_error.
std::vector<SimulationSetting> load_table_grid(const std::string& path);

/// Same, from the text content.
std::vector<SimulationSetting> parse_table_grid(const std::string& text);

}  // namespace randpv
