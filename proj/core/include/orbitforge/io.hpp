#pragma once

// Orbit records (JSON) and the census table (CSV).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "orbitforge/closure.hpp"

namespace orbitforge {

std::string to_string(VerdictStatus s);
// Throws Error(IoError) on an unknown name.
VerdictStatus verdict_from_string(const std::string& s);

// {sequence, p, T, points, return_times, residual, iterations, verified, verdict}.
// `verified` is true only for an Existence verdict; `verdict` holds
// {status, radius, K_width_max, retries}.
std::string orbit_to_json(const PeriodicOrbit& orbit, int indent = 2);
// Throws Error(IoError) on malformed input.
PeriodicOrbit orbit_from_json(const std::string& text);

void write_orbit_json(std::ostream& out, const PeriodicOrbit& orbit);
PeriodicOrbit read_orbit_json(std::istream& in);

struct CensusRow {
  std::size_t p = 0;
  double T = 0.0;
  std::string s;
};

// CSV "p,T,s" with T to five decimals.
void write_census_csv(std::ostream& out, const std::vector<PeriodicOrbit>& orbits);
std::vector<CensusRow> read_census_csv(std::istream& in);

}  // namespace orbitforge
