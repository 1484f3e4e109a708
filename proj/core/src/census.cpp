#include "orbitforge/census.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "orbitforge/krawczyk.hpp"
#include "orbitforge/worker_pool.hpp"

namespace orbitforge {

ClosureConfig CensusConfig::closure() const {
  ClosureConfig c;
  c.params = params;
  c.section = section;
  c.dt = dt;
  c.newton_tol = newton_tol;
  c.max_iter = max_iter;
  return c;
}

void CensusConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
  try {
    params.validate();
    section.validate();
    window.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (!(dt > 0.0)) fail("dt must be positive");
  if (window.dt != dt) fail("window dt must equal dt");
  if (!(transient >= 0.0)) fail("transient must be non-negative");
  if (!(search_time > 0.0)) fail("search_time must be positive");
  if (!(gap_tol > 0.0)) fail("gap_tol must be positive");
  if (!(newton_tol > 0.0)) fail("newton_tol must be positive");
  if (!(krawczyk_radius > 0.0)) fail("krawczyk_radius must be positive");
  if (p_max < 2) fail("pmax must be at least 2");
  if (max_iter < 1) fail("max_iter must be at least 1");
}

CensusResult segment_search(const CensusConfig& cfg) {
  cfg.validate();
  CensusResult out;
  const State3 start = flow(cfg.seed, cfg.params, cfg.transient, cfg.dt);
  const StepPlan plan = plan_steps(cfg.search_time, cfg.dt);
  StreamConfig sc;
  sc.params = cfg.params;
  sc.window = cfg.window;
  sc.section = cfg.section;
  sc.method = cfg.method;
  out.segmentation = segment_stream(start, plan.whole_steps, sc, cfg.transient);
  out.quasi_orbits = quasi_orbits(out.segmentation, cfg.gap_tol, cfg.max_crossings);
  out.segmentation.endpoint_gaps.clear();
  for (const QuasiOrbit& q : out.quasi_orbits) out.segmentation.endpoint_gaps.push_back(q.gap);
  return out;
}

void close_candidates(CensusResult& result, const CensusConfig& cfg) {
  const ClosureConfig ccfg = cfg.closure();
  const std::vector<SymbolSequence> candidates = enumerate_candidates(cfg.p_max);

  std::vector<std::optional<CensusEntry>> found(candidates.size());
  std::vector<std::string> reasons(candidates.size());

  parallel_for(candidates.size(), cfg.threads, [&](std::size_t c) {
    const SymbolSequence& target = candidates[c];
    const SymbolSequence flipped = mirror(target);

    // (gap, source, state)
    std::vector<std::tuple<double, SeedSource, ShootingState>> seeds;
    std::vector<std::pair<double, const QuasiOrbit*>> arcs;
    for (const QuasiOrbit& q : result.quasi_orbits) {
      const SymbolSequence w = q.raw_word();
      const SymbolSequence cw = canonicalize(w.word);
      if (cw.period() != w.period()) continue;
      if (cw == target || cw == flipped) arcs.emplace_back(q.gap, &q);
    }
    std::stable_sort(arcs.begin(), arcs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < arcs.size() && i < cfg.quasi_seeds; ++i) {
      const QuasiOrbit& q = *arcs[i].second;
      ShootingState s = seed_from_crossings(q.section);
      if (canonicalize(q.raw_word().word) != target) s = mirror_state(s);
      seeds.emplace_back(q.gap, SeedSource::QuasiOrbit, std::move(s));
    }
    for (ShootingState& s : seed_candidates(target, {}, result.segmentation.crossings, cfg.block_seeds)) {
      seeds.emplace_back(0.0, SeedSource::AttractorBlock, std::move(s));
    }

    std::string last = "no seed: sequence never seen on the attractor";
    for (auto& [gap, source, state] : seeds) {
      try {
        CensusEntry e;
        e.orbit = newton_close(state, ccfg, target);
        e.source = source;
        e.seed_gap = gap;
        found[c] = std::move(e);
        return;
      } catch (const Error& err) {
        if (!is_numerical(err.code())) throw;
        last = err.what();
      }
    }
    reasons[c] = last;
  });

  result.entries.clear();
  result.failures.clear();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (found[c])
      result.entries.push_back(std::move(*found[c]));
    else
      result.failures.push_back({candidates[c], reasons[c]});
  }
  std::stable_sort(result.entries.begin(), result.entries.end(), [](const CensusEntry& a, const CensusEntry& b) {
    const auto pa = a.orbit.sequence.period(), pb = b.orbit.sequence.period();
    return pa != pb ? pa < pb : a.orbit.T < b.orbit.T;
  });

  if (cfg.verify) {
    std::vector<PeriodicOrbit> orbits;
    for (const CensusEntry& e : result.entries) orbits.push_back(e.orbit);
    verify_census(orbits, cfg.krawczyk_radius, ccfg, cfg.threads);
    for (std::size_t i = 0; i < orbits.size(); ++i) result.entries[i].orbit.verified = orbits[i].verified;
  }
}

CensusResult run_census(const CensusConfig& cfg) {
  CensusResult r = segment_search(cfg);
  close_candidates(r, cfg);
  return r;
}

}  // namespace orbitforge
