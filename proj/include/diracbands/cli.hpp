#pragma once

#include <string>
#include <vector>

#include "diracbands/lattice.hpp"

namespace diracbands {

// Full command-line entry point. Returns the process exit code:
// 0 success, 2 invalid configuration, 3 numerical failure, 64 unknown or
// missing subcommand, 65 input schema mismatch, 66 missing input file,
// 70 unexpected internal error. Failures emit one machine-readable JSON
// object on stderr. Honors the DIRACBANDS_THREADS environment variable.
int run_cli(const std::vector<std::string>& args);

// Parses a waypoint list such as "-0.5k1:0.5k1" or "0:0.5k1+0.5k2" into
// k-space points; each waypoint is a signed linear combination of k1, k2.
std::vector<Vec2> parse_k_waypoints(const std::string& spec, const LatticeBasis& lattice);

}  // namespace diracbands
