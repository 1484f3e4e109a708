#pragma once

// Flat key = value run configuration shared by every subcommand.

#include <cstddef>
#include <iosfwd>
#include <string>

#include "orbitforge/census.hpp"

namespace orbitforge::cli {

struct RunConfig {
  LorenzParams params;
  State3 seed{1.0, 1.0, 1.0};
  double dt = kDefaultDt;
  double transient = 10.0;
  // simulate and signature record [transient, sim_time].
  double sim_time = 50.0;
  // segment, find-orbits and census record [transient, transient + search_time].
  double search_time = 50000.0;
  WindowConfig window;
  SectionConfig section;
  SignatureMethod method = SignatureMethod::Analytic;
  double gap_tol = 0.005;
  std::size_t max_crossings = 10;
  double newton_tol = 1e-11;
  int max_iter = 50;
  double krawczyk_radius = 1e-6;
  std::size_t p_max = 8;
  std::string output_dir = "out";
  bool gnuplot = false;
  bool projections = false;
  // Sample stride of the per-orbit CSVs written by find-orbits and census.
  std::size_t orbit_stride = 10;
  std::size_t threads = 1;

  // Throws Error(ConfigError).
  void validate() const;
  CensusConfig census() const;
};

// Applies `key = value` lines to cfg. Blank lines and # comments are
// ignored; strings may be bare or double-quoted. Throws Error(ConfigError) on
// unknown keys, tables or malformed values.
void apply_config_text(const std::string& text, RunConfig& cfg);
// Throws Error(IoError) if the file cannot be read.
void apply_config_file(const std::string& path, RunConfig& cfg);

// Every key with its current value, in the accepted syntax.
void write_config(std::ostream& out, const RunConfig& cfg);

SignatureMethod parse_method(const std::string& s);
std::string to_string(SignatureMethod m);

}  // namespace orbitforge::cli
