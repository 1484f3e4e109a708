#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "orbitforge/worker_pool.hpp"

using namespace orbitforge;
using namespace orbitforge::cli;

int main(int argc, char** argv) {
  CLI::App app{"orbitforge: unstable periodic orbits of the Lorenz system"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<double> dt, sigma, eta, r, radius;
  std::optional<std::size_t> pmax;
  std::optional<std::string> out, method;
  bool gnuplot = false, projections = false;
  std::vector<std::string> orbit_files;

  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--dt", dt, "RK4 step");
  app.add_option("--sigma", sigma);
  app.add_option("--eta", eta);
  app.add_option("--r", r);
  app.add_option("--pmax", pmax, "largest period to close");
  app.add_option("--radius", radius, "Krawczyk box half-width");
  app.add_option("--out", out, "output directory");
  app.add_option("--method", method, "signature invariants: analytic or discrete");
  app.add_flag("--gnuplot", gnuplot, "also write gnuplot scripts");
  app.add_flag("--projections", projections, "signature: write the three coordinate-plane projections");

  auto* simulate = app.add_subcommand("simulate", "integrate and write trajectory.csv");
  auto* signature = app.add_subcommand("signature", "similarity signature of the simulated trajectory");
  auto* segment = app.add_subcommand("segment", "sliding-window segmentation and quasi-orbits");
  auto* find = app.add_subcommand("find-orbits", "close every candidate sequence up to pmax");
  auto* verify = app.add_subcommand("verify", "Krawczyk test of orbit JSON records");
  verify->add_option("files", orbit_files, "orbit JSON files")->required();
  auto* census = app.add_subcommand("census", "segmentation, closure and verification in one run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::FileError) ? kIo : kConfig);
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    if (dt) cfg.dt = *dt;
    cfg.window.dt = cfg.dt;
    if (sigma) cfg.params.sigma = *sigma;
    if (eta) cfg.params.eta = *eta;
    if (r) cfg.params.r = *r;
    if (pmax) cfg.p_max = *pmax;
    if (radius) cfg.krawczyk_radius = *radius;
    if (out) cfg.output_dir = *out;
    if (method) cfg.method = parse_method(*method);
    cfg.gnuplot = cfg.gnuplot || gnuplot;
    cfg.projections = cfg.projections || projections;
    cfg.threads = default_threads();
    cfg.validate();

    if (*simulate) cmd_simulate(cfg, std::cout);
    if (*signature) cmd_signature(cfg, std::cout);
    if (*segment) cmd_segment(cfg, std::cout);
    if (*find) return cmd_find_orbits(cfg, std::cout);
    if (*verify) cmd_verify(cfg, orbit_files, std::cout);
    if (*census) return cmd_census(cfg, std::cout);
    return kOk;
  } catch (const Error& e) {
    std::cerr << "orbitforge: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "orbitforge: " << e.what() << '\n';
    return kIo;
  }
}
