#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "orbitforge/io.hpp"

using namespace orbitforge;
using namespace orbitforge::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "orbitforge_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

RunConfig small_census(const std::string& out) {
  RunConfig cfg;
  apply_config_file(std::string(ORBITFORGE_CLI_DATA) + "/census_small.toml", cfg);
  cfg.output_dir = out;
  return cfg;
}

// Every regular file under root, relative path -> bytes.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

}  // namespace

TEST_SUITE("commands") {
  TEST_CASE("exit codes") {
    CHECK(exit_code_for(ErrorCode::ConfigError) == 2);
    CHECK(exit_code_for(ErrorCode::InvalidArgument) == 2);
    CHECK(exit_code_for(ErrorCode::IoError) == 4);
    CHECK(exit_code_for(ErrorCode::NoConvergence) == 3);
    CHECK(exit_code_for(ErrorCode::EnclosureBlowup) == 3);
    CHECK(exit_code_for(ErrorCode::Divergence) == 3);
  }

  TEST_CASE("simulate writes one row per step after the transient") {
    RunConfig cfg;
    cfg.output_dir = scratch("simulate").string();
    std::ostringstream log;
    cmd_simulate(cfg, log);
    const fs::path f = fs::path(cfg.output_dir) / "trajectory.csv";
    CHECK(line_count(f) == 1 + 80001);
    std::ifstream in(f);
    const Trajectory tr = read_trajectory_csv(in);
    REQUIRE(tr.size() == 80001);
    CHECK(tr.t0 == 10.0);
    CHECK(tr.time(tr.size() - 1) == doctest::Approx(50.0));
    CHECK(tr.samples == simulated_trajectory(cfg).samples);
  }

  TEST_CASE("fixed-point seed gives constant rows") {
    RunConfig cfg;
    const double w = std::sqrt(72.0);
    cfg.seed = {w, w, 27.0};
    cfg.sim_time = 12.0;
    const Trajectory tr = simulated_trajectory(cfg);
    for (const State3& s : tr.samples) CHECK(distance(s, cfg.seed) < 1e-12);
  }

  TEST_CASE("transient equal to sim_time is rejected") {
    RunConfig cfg;
    cfg.transient = cfg.sim_time;
    cfg.output_dir = scratch("rejected").string();
    std::ostringstream log;
    try {
      cmd_simulate(cfg, log);
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigError);
    }
    CHECK_FALSE(fs::exists(fs::path(cfg.output_dir) / "trajectory.csv"));
  }

  TEST_CASE("signature files for both methods") {
    RunConfig cfg;
    cfg.sim_time = 20.0;
    cfg.projections = true;
    cfg.gnuplot = true;
    cfg.output_dir = scratch("signature").string();
    std::ostringstream log;
    for (SignatureMethod m : {SignatureMethod::Analytic, SignatureMethod::Discrete}) {
      cfg.method = m;
      cmd_signature(cfg, log);
      const fs::path f = fs::path(cfg.output_dir) / ("signature_" + to_string(m) + ".csv");
      std::ifstream in(f);
      const SignatureCurve c = read_signature_csv(in);
      const std::size_t n = simulated_trajectory(cfg).size();
      CHECK(c.size() + 3 >= n);
      CHECK(c.points.back().index < n);
      for (const char* proj : {"_k_ks", "_k_tau", "_ks_tau"})
        CHECK(fs::exists(fs::path(cfg.output_dir) / ("signature_" + to_string(m) + proj + ".csv")));
      CHECK(fs::exists(fs::path(cfg.output_dir) / ("signature_" + to_string(m) + ".gp")));
    }
  }

  TEST_CASE("segment output round trips") {
    RunConfig cfg = small_census(scratch("segment").string());
    cfg.search_time = 300.0;
    std::ostringstream log;
    cmd_segment(cfg, log);
    const fs::path d(cfg.output_dir);
    std::ifstream seg(d / "segmentation.csv"), arcs(d / "quasi_orbits.csv"), cs(d / "crossings.csv");
    const auto points = read_segmentation_csv(seg);
    CHECK(points.size() > 100);
    const auto rows = read_quasi_orbits_csv(arcs);
    for (const auto& r : rows) CHECK(r.gap <= cfg.gap_tol);
    CHECK(read_crossings_csv(cs, 27.0).size() > 200);
  }

  TEST_CASE("find-orbits: one orbit at pmax 2, seven at pmax 5") {
    std::ostringstream log;
    RunConfig two = small_census(scratch("find2").string());
    two.p_max = 2;
    CHECK(cmd_find_orbits(two, log) == kOk);
    std::ifstream c2(fs::path(two.output_dir) / "census.csv");
    const auto rows2 = read_census_csv(c2);
    REQUIRE(rows2.size() == 1);
    CHECK(rows2[0].s == "LR");
    CHECK(std::fabs(rows2[0].T - 1.55865) < 1e-3);

    RunConfig five = small_census(scratch("find5").string());
    CHECK(cmd_find_orbits(five, log) == kOk);
    std::ifstream c5(fs::path(five.output_dir) / "census.csv");
    const auto rows5 = read_census_csv(c5);
    CHECK(rows5.size() == 7);
    for (const auto& r : rows5) {
      std::ifstream js(fs::path(five.output_dir) / "orbits" / (r.s + ".json"));
      const PeriodicOrbit o = read_orbit_json(js);
      CHECK(o.sequence.word == r.s);
      CHECK(std::fabs(o.T - r.T) <= 5e-6);
      CHECK(o.verified.status == VerdictStatus::Unverified);
      CHECK(fs::exists(fs::path(five.output_dir) / "orbits" / (r.s + ".csv")));
    }
  }

  TEST_CASE("verify annotates orbit files") {
    RunConfig cfg;
    cfg.output_dir = scratch("verify").string();
    std::ostringstream log;
    const std::string lr = std::string(ORBITFORGE_CLI_DATA) + "/lr.json";
    cmd_verify(cfg, {lr}, log);
    std::ifstream in(fs::path(cfg.output_dir) / "lr.json");
    const PeriodicOrbit o = read_orbit_json(in);
    CHECK(o.verified.status == VerdictStatus::Existence);
    CHECK(o.verified.radius == 1e-6);

    try {
      cmd_verify(cfg, {"/nonexistent/orbit.json"}, log);
      FAIL("expected IoError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
    cfg.krawczyk_radius = 0.0;
    try {
      cmd_verify(cfg, {lr}, log);
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigError);
    }
  }

  TEST_CASE("census is deterministic and matches the golden table") {
    std::ostringstream log;
    RunConfig a = small_census(scratch("census_a").string());
    RunConfig b = small_census(scratch("census_b").string());
    b.threads = 3;
    CHECK(cmd_census(a, log) == kOk);
    CHECK(cmd_census(b, log) == kOk);
    const auto ta = tree(a.output_dir), tb = tree(b.output_dir);
    CHECK(ta.size() == tb.size());
    for (const auto& [name, bytes] : ta) {
      INFO(name);
      REQUIRE(tb.count(name) == 1);
      CHECK(bytes == tb.at(name));
    }
    for (const auto& [name, bytes] : ta) {
      if (name.size() < 5 || name.substr(name.size() - 5) != ".json") continue;
      const PeriodicOrbit o = orbit_from_json(bytes);
      CHECK(o.verified.status == VerdictStatus::Existence);
    }

    const fs::path golden = fs::path(ORBITFORGE_GOLDEN_DIR) / "census_p5.csv";
    const std::string fresh = ta.at("census.csv");
    if (std::getenv("ORBITFORGE_UPDATE_GOLDEN")) {
      std::ofstream(golden, std::ios::binary) << fresh;
      MESSAGE("rewrote " << golden);
    }
    REQUIRE(fs::exists(golden));
    CHECK(fresh == slurp(golden));
  }
}
