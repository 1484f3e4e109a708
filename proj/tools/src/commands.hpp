#pragma once

// Subcommand bodies. Each writes its files under cfg.output_dir, prints a
// short summary to `log`, and throws orbitforge::Error on failure.

#include <iosfwd>
#include <string>
#include <vector>

#include "orbitforge/error.hpp"
#include "run_config.hpp"

namespace orbitforge::cli {

enum ExitCode : int { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

int exit_code_for(ErrorCode code) noexcept;

// Integrated trajectory over [transient, sim_time].
Trajectory simulated_trajectory(const RunConfig& cfg);

void cmd_simulate(const RunConfig& cfg, std::ostream& log);
void cmd_signature(const RunConfig& cfg, std::ostream& log);
void cmd_segment(const RunConfig& cfg, std::ostream& log);
// Returns kNumerical if some candidate failed to close, kOk otherwise.
int cmd_find_orbits(const RunConfig& cfg, std::ostream& log);
void cmd_verify(const RunConfig& cfg, const std::vector<std::string>& orbit_files, std::ostream& log);
int cmd_census(const RunConfig& cfg, std::ostream& log);

}  // namespace orbitforge::cli
