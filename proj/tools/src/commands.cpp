#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "orbitforge/io.hpp"
#include "orbitforge/krawczyk.hpp"

namespace orbitforge::cli {

namespace fs = std::filesystem;

namespace {

fs::path prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

// Writes through a temporary stream; an unwritable path is an I/O error.
template <class Fn>
void write_file(const fs::path& path, Fn&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

void write_orbit_samples(std::ostream& out, const PeriodicOrbit& o, const ClosureConfig& cc, std::size_t stride) {
  const std::vector<State3> pts = orbit_samples(o, cc, stride);
  out << "t,x,y,z\n";
  char buf[128];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = i + 1 == pts.size() ? o.T : static_cast<double>(i * stride) * cc.dt;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t, pts[i].x, pts[i].y, pts[i].z);
    out << buf;
  }
}

void write_orbits(const fs::path& dir, const std::vector<CensusEntry>& entries, const RunConfig& cfg,
                  std::ostream& log) {
  const fs::path orbit_dir = prepare_dir(dir / "orbits");
  const ClosureConfig cc = cfg.census().closure();
  std::vector<PeriodicOrbit> orbits;
  for (const CensusEntry& e : entries) orbits.push_back(e.orbit);
  write_file(dir / "census.csv", [&](std::ostream& out) { write_census_csv(out, orbits); });
  for (const PeriodicOrbit& o : orbits) {
    write_file(orbit_dir / (o.sequence.word + ".json"), [&](std::ostream& out) { write_orbit_json(out, o); });
    write_file(orbit_dir / (o.sequence.word + ".csv"),
               [&](std::ostream& out) { write_orbit_samples(out, o, cc, cfg.orbit_stride); });
  }
  char line[160];
  for (const PeriodicOrbit& o : orbits) {
    std::snprintf(line, sizeof line, "%zu %.5f %s", o.sequence.period(), o.T, o.sequence.word.c_str());
    log << line;
    if (o.verified.status != VerdictStatus::Unverified) log << "  " << to_string(o.verified.status);
    log << '\n';
  }
}

void write_segmentation(const fs::path& dir, const CensusResult& r) {
  write_file(dir / "segmentation.csv", [&](std::ostream& out) { write_segmentation_csv(out, r.segmentation); });
  write_file(dir / "quasi_orbits.csv", [&](std::ostream& out) { write_quasi_orbits_csv(out, r.quasi_orbits); });
  write_file(dir / "crossings.csv", [&](std::ostream& out) { write_crossings_csv(out, r.segmentation.crossings); });
}

int report_failures(const CensusResult& r, std::ostream& log) {
  for (const CensusFailure& f : r.failures) log << "unclosed " << f.sequence.word << ": " << f.reason << '\n';
  return r.failures.empty() ? kOk : kNumerical;
}

void gnuplot_script(const fs::path& path, const std::string& body) {
  write_file(path, [&](std::ostream& out) { out << "set datafile separator ','\nset key off\n" << body; });
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument: return kConfig;
    case ErrorCode::IoError: return kIo;
    default: return kNumerical;
  }
}

Trajectory simulated_trajectory(const RunConfig& cfg) {
  cfg.validate();
  const State3 start = flow(cfg.seed, cfg.params, cfg.transient, cfg.dt);
  Trajectory traj = integrate(start, cfg.params, cfg.dt, plan_steps(cfg.sim_time - cfg.transient, cfg.dt).whole_steps);
  traj.t0 = cfg.transient;
  return traj;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const Trajectory traj = simulated_trajectory(cfg);
  const fs::path dir = prepare_dir(cfg.output_dir);
  write_file(dir / "trajectory.csv", [&](std::ostream& out) { write_trajectory_csv(out, traj); });
  if (cfg.gnuplot)
    gnuplot_script(dir / "trajectory.gp",
                   "set xlabel 'x'\nset ylabel 'y'\nset zlabel 'z'\n"
                   "splot 'trajectory.csv' every ::1 using 2:3:4 with lines lw 0.5\npause -1\n");
  log << "trajectory.csv: " << traj.size() << " samples, t in [" << traj.time(0) << ", "
      << traj.time(traj.size() - 1) << "]\n";
}

void cmd_signature(const RunConfig& cfg, std::ostream& log) {
  const Trajectory traj = simulated_trajectory(cfg);
  const SignatureCurve curve = signature_curve(traj, cfg.params, cfg.method);
  const fs::path dir = prepare_dir(cfg.output_dir);
  const std::string name = "signature_" + to_string(cfg.method);
  write_file(dir / "trajectory.csv", [&](std::ostream& out) { write_trajectory_csv(out, traj); });
  write_file(dir / (name + ".csv"), [&](std::ostream& out) { write_signature_csv(out, curve); });
  if (cfg.projections) {
    struct Plane {
      const char* suffix;
      const char* header;
      double SignaturePoint::*a;
      double SignaturePoint::*b;
    };
    const Plane planes[] = {
        {"k_ks", "kappa_tilde,kappa_tilde_s", &SignaturePoint::kappa_tilde, &SignaturePoint::kappa_tilde_s},
        {"k_tau", "kappa_tilde,tau_tilde", &SignaturePoint::kappa_tilde, &SignaturePoint::tau_tilde},
        {"ks_tau", "kappa_tilde_s,tau_tilde", &SignaturePoint::kappa_tilde_s, &SignaturePoint::tau_tilde},
    };
    for (const Plane& pl : planes) {
      write_file(dir / (name + "_" + pl.suffix + ".csv"), [&](std::ostream& out) {
        out << "idx," << pl.header << '\n';
        char buf[96];
        for (const SignaturePoint& sp : curve.points) {
          std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", sp.index, sp.*pl.a, sp.*pl.b);
          out << buf;
        }
      });
    }
  }
  if (cfg.gnuplot)
    gnuplot_script(dir / (name + ".gp"), "set xlabel 'kappa~'\nset ylabel 'kappa~_s'\nset zlabel 'tau~'\n"
                                         "splot '" + name + ".csv' every ::1 using 3:4:5 with lines lw 0.5\npause -1\n");
  log << name << ".csv: " << curve.size() << " points of " << traj.size() << " samples\n";
}

void cmd_segment(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const CensusResult r = segment_search(cfg.census());
  const fs::path dir = prepare_dir(cfg.output_dir);
  write_segmentation(dir, r);
  if (cfg.gnuplot)
    gnuplot_script(dir / "segmentation.gp",
                   "splot 'segmentation.csv' every ::1 using ($10 == 1 ? $3 : 1/0):4:5 with points pt 7 ps 0.3\n"
                   "pause -1\n");
  log << "segmentation points: " << r.segmentation.points.size() << " (" << r.segmentation.filtered_points.size()
      << " kept), quasi-orbits: " << r.quasi_orbits.size() << ", crossings: " << r.segmentation.crossings.size()
      << '\n';
}

int cmd_find_orbits(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  CensusConfig cc = cfg.census();
  cc.verify = false;
  const CensusResult r = run_census(cc);
  const fs::path dir = prepare_dir(cfg.output_dir);
  write_orbits(dir, r.entries, cfg, log);
  if (cfg.gnuplot)
    gnuplot_script(dir / "census.gp", "set xlabel 'p'\nset ylabel 'T'\nplot 'census.csv' every ::1 using 1:2 with points pt 7\npause -1\n");
  return report_failures(r, log);
}

void cmd_verify(const RunConfig& cfg, const std::vector<std::string>& orbit_files, std::ostream& log) {
  cfg.validate();
  if (orbit_files.empty()) throw Error(ErrorCode::ConfigError, "verify needs at least one orbit JSON file");
  std::vector<PeriodicOrbit> orbits;
  for (const std::string& f : orbit_files) {
    std::ifstream in(f);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + f);
    orbits.push_back(read_orbit_json(in));
  }
  verify_census(orbits, cfg.krawczyk_radius, cfg.census().closure(), cfg.threads);
  const fs::path dir = prepare_dir(cfg.output_dir);
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const fs::path target = dir / fs::path(orbit_files[i]).filename();
    write_file(target, [&](std::ostream& out) { write_orbit_json(out, orbits[i]); });
    char line[200];
    std::snprintf(line, sizeof line, "%s %s radius=%g K_width_max=%.3g retries=%d\n", orbits[i].sequence.word.c_str(),
                  to_string(orbits[i].verified.status).c_str(), orbits[i].verified.radius,
                  orbits[i].verified.k_width_max, orbits[i].verified.retries);
    log << line;
  }
}

int cmd_census(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  CensusConfig cc = cfg.census();
  cc.verify = true;
  const CensusResult r = run_census(cc);
  const fs::path dir = prepare_dir(cfg.output_dir);
  write_segmentation(dir, r);
  write_orbits(dir, r.entries, cfg, log);
  if (cfg.gnuplot) {
    std::string body = "set xlabel 'x'\nset ylabel 'z'\nplot ";
    for (std::size_t i = 0; i < r.entries.size(); ++i)
      body += (i ? ", " : "") + std::string("'orbits/") + r.entries[i].orbit.sequence.word +
              ".csv' every ::1 using 2:4 with lines";
    gnuplot_script(dir / "orbits.gp", body + "\npause -1\n");
  }
  return report_failures(r, log);
}

}  // namespace orbitforge::cli
