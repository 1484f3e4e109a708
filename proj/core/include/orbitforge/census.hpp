#pragma once

// End-to-end orbit search: transient, streamed segmentation, quasi-orbit
// extraction, Newton closure per candidate sequence, optional verification.

#include <cstddef>
#include <string>
#include <vector>

#include "orbitforge/closure.hpp"
#include "orbitforge/segment.hpp"

namespace orbitforge {

struct CensusConfig {
  LorenzParams params;
  State3 seed{1.0, 1.0, 1.0};
  double dt = kDefaultDt;
  double transient = 10.0;
  // Length of the segmented trajectory after the transient.
  double search_time = 50000.0;
  WindowConfig window;
  SectionConfig section;
  SignatureMethod method = SignatureMethod::Analytic;
  double gap_tol = 0.005;
  std::size_t max_crossings = 10;
  std::size_t p_max = 8;
  double newton_tol = 1e-11;
  int max_iter = 50;
  // Quasi-orbit seeds tried per sequence before falling back to attractor crossings.
  std::size_t quasi_seeds = 4;
  std::size_t block_seeds = 8;
  bool verify = false;
  double krawczyk_radius = 1e-6;
  std::size_t threads = 1;

  ClosureConfig closure() const;
  // Throws Error(ConfigError) on inconsistent settings.
  void validate() const;
};

enum class SeedSource { QuasiOrbit, AttractorBlock };

struct CensusEntry {
  PeriodicOrbit orbit;
  SeedSource source = SeedSource::QuasiOrbit;
  // Endpoint gap of the seeding quasi-orbit; 0 for attractor blocks.
  double seed_gap = 0.0;
};

struct CensusFailure {
  SymbolSequence sequence;
  std::string reason;
};

struct CensusResult {
  SegmentationResult segmentation;
  std::vector<QuasiOrbit> quasi_orbits;
  // Sorted by period, then flow time.
  std::vector<CensusEntry> entries;
  std::vector<CensusFailure> failures;
};

// Segmentation stage only: transient, streamed segmentation, quasi-orbits
// (whose gaps are also stored in segmentation.endpoint_gaps).
CensusResult segment_search(const CensusConfig& cfg);

// Closes every candidate of period <= p_max using the quasi-orbits and
// crossings already in `result`, then verifies if cfg.verify.
void close_candidates(CensusResult& result, const CensusConfig& cfg);

CensusResult run_census(const CensusConfig& cfg);

}  // namespace orbitforge
