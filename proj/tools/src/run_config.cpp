#include "run_config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace orbitforge::cli {

namespace {

[[noreturn]] void fail(const std::string& m) { throw Error(ErrorCode::ConfigError, m); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double as_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) fail(key + ": expected a number, got '" + v + "'");
  return out;
}

long long as_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(key + ": expected an integer, got '" + v + "'");
  return out;
}

std::size_t as_count(const std::string& key, const std::string& v) {
  const long long n = as_integer(key, v);
  if (n < 0) fail(key + " must be non-negative");
  return static_cast<std::size_t>(n);
}

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(key + ": expected true or false, got '" + v + "'");
}

std::string as_string(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"sigma", [](RunConfig& c, auto& k, auto& v) { c.params.sigma = as_double(k, v); }},
      {"eta", [](RunConfig& c, auto& k, auto& v) { c.params.eta = as_double(k, v); }},
      {"r", [](RunConfig& c, auto& k, auto& v) { c.params.r = as_double(k, v); }},
      {"seed_x", [](RunConfig& c, auto& k, auto& v) { c.seed.x = as_double(k, v); }},
      {"seed_y", [](RunConfig& c, auto& k, auto& v) { c.seed.y = as_double(k, v); }},
      {"seed_z", [](RunConfig& c, auto& k, auto& v) { c.seed.z = as_double(k, v); }},
      {"dt", [](RunConfig& c, auto& k, auto& v) { c.dt = as_double(k, v); }},
      {"transient", [](RunConfig& c, auto& k, auto& v) { c.transient = as_double(k, v); }},
      {"sim_time", [](RunConfig& c, auto& k, auto& v) { c.sim_time = as_double(k, v); }},
      {"search_time", [](RunConfig& c, auto& k, auto& v) { c.search_time = as_double(k, v); }},
      {"window_size", [](RunConfig& c, auto& k, auto& v) { c.window.window_size = as_count(k, v); }},
      {"refractory", [](RunConfig& c, auto& k, auto& v) { c.window.refractory = as_count(k, v); }},
      {"distance",
       [](RunConfig& c, auto& k, auto& v) {
         const std::string s = as_string(v);
         if (s == "signature")
           c.window.distance = DistanceMode::Signature;
         else if (s == "phase")
           c.window.distance = DistanceMode::Phase;
         else
           fail(k + ": expected signature or phase, got '" + s + "'");
       }},
      {"plane_z", [](RunConfig& c, auto& k, auto& v) { c.section.plane_z = as_double(k, v); }},
      {"direction",
       [](RunConfig& c, auto& k, auto& v) { c.section.direction = static_cast<int>(as_integer(k, v)); }},
      {"method", [](RunConfig& c, auto&, auto& v) { c.method = parse_method(as_string(v)); }},
      {"gap_tol", [](RunConfig& c, auto& k, auto& v) { c.gap_tol = as_double(k, v); }},
      {"max_crossings", [](RunConfig& c, auto& k, auto& v) { c.max_crossings = as_count(k, v); }},
      {"newton_tol", [](RunConfig& c, auto& k, auto& v) { c.newton_tol = as_double(k, v); }},
      {"max_iter", [](RunConfig& c, auto& k, auto& v) { c.max_iter = static_cast<int>(as_integer(k, v)); }},
      {"krawczyk_radius", [](RunConfig& c, auto& k, auto& v) { c.krawczyk_radius = as_double(k, v); }},
      {"pmax", [](RunConfig& c, auto& k, auto& v) { c.p_max = as_count(k, v); }},
      {"output_dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = as_string(v); }},
      {"gnuplot", [](RunConfig& c, auto& k, auto& v) { c.gnuplot = as_bool(k, v); }},
      {"projections", [](RunConfig& c, auto& k, auto& v) { c.projections = as_bool(k, v); }},
      {"orbit_stride", [](RunConfig& c, auto& k, auto& v) { c.orbit_stride = as_count(k, v); }},
  };
  return table;
}

}  // namespace

SignatureMethod parse_method(const std::string& s) {
  if (s == "analytic") return SignatureMethod::Analytic;
  if (s == "discrete") return SignatureMethod::Discrete;
  fail("method: expected analytic or discrete, got '" + s + "'");
}

std::string to_string(SignatureMethod m) { return m == SignatureMethod::Analytic ? "analytic" : "discrete"; }

void RunConfig::validate() const {
  try {
    params.validate();
    section.validate();
    window.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (window.dt != dt) fail("window dt must equal dt");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(transient >= 0.0)) fail("transient must be non-negative");
  if (!(sim_time > transient)) fail("sim_time must exceed transient");
  if (!(search_time > 0.0)) fail("search_time must be positive");
  if (!(gap_tol > 0.0)) fail("gap_tol must be positive");
  if (!(newton_tol > 0.0)) fail("newton_tol must be positive");
  if (!(krawczyk_radius > 0.0)) fail("krawczyk_radius must be positive");
  if (max_iter < 1) fail("max_iter must be at least 1");
  if (p_max < 2 || p_max > 24) fail("pmax must lie in 2..24");
  if (max_crossings < 1) fail("max_crossings must be at least 1");
  if (orbit_stride < 1) fail("orbit_stride must be at least 1");
  if (output_dir.empty()) fail("output_dir must not be empty");
}

CensusConfig RunConfig::census() const {
  CensusConfig c;
  c.params = params;
  c.seed = seed;
  c.dt = dt;
  c.transient = transient;
  c.search_time = search_time;
  c.window = window;
  c.section = section;
  c.method = method;
  c.gap_tol = gap_tol;
  c.max_crossings = max_crossings;
  c.p_max = p_max;
  c.newton_tol = newton_tol;
  c.max_iter = max_iter;
  c.krawczyk_radius = krawczyk_radius;
  c.threads = threads;
  return c;
}

void apply_config_text(const std::string& text, RunConfig& cfg) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') fail(where + "tables are not supported; the config is flat");
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(where + "expected key = value");
    const auto it = setters().find(key);
    if (it == setters().end()) fail(where + "unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
  cfg.window.dt = cfg.dt;
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(buf.str(), cfg);
}

void write_config(std::ostream& out, const RunConfig& c) {
  auto num = [&](const char* k, double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.17g", v);
    out << k << " = " << b << '\n';
  };
  num("sigma", c.params.sigma);
  num("eta", c.params.eta);
  num("r", c.params.r);
  num("seed_x", c.seed.x);
  num("seed_y", c.seed.y);
  num("seed_z", c.seed.z);
  num("dt", c.dt);
  num("transient", c.transient);
  num("sim_time", c.sim_time);
  num("search_time", c.search_time);
  out << "window_size = " << c.window.window_size << '\n';
  out << "refractory = " << c.window.refractory << '\n';
  out << "distance = \"" << (c.window.distance == DistanceMode::Signature ? "signature" : "phase") << "\"\n";
  num("plane_z", c.section.plane_z);
  out << "direction = " << c.section.direction << '\n';
  out << "method = \"" << to_string(c.method) << "\"\n";
  num("gap_tol", c.gap_tol);
  out << "max_crossings = " << c.max_crossings << '\n';
  num("newton_tol", c.newton_tol);
  out << "max_iter = " << c.max_iter << '\n';
  num("krawczyk_radius", c.krawczyk_radius);
  out << "pmax = " << c.p_max << '\n';
  out << "output_dir = \"" << c.output_dir << "\"\n";
  out << "gnuplot = " << (c.gnuplot ? "true" : "false") << '\n';
  out << "projections = " << (c.projections ? "true" : "false") << '\n';
  out << "orbit_stride = " << c.orbit_stride << '\n';
}

}  // namespace orbitforge::cli
