#include "orbitforge/io.hpp"

#include <cstdio>
#include <istream>
#include <iterator>
#include <ostream>

#include "json.hpp"

namespace orbitforge {

using nlohmann::json;

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Unverified: return "Unverified";
    case VerdictStatus::Existence: return "Existence";
    case VerdictStatus::NoOrbit: return "NoOrbit";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "Unverified";
}

VerdictStatus verdict_from_string(const std::string& s) {
  for (VerdictStatus v : {VerdictStatus::Unverified, VerdictStatus::Existence, VerdictStatus::NoOrbit,
                          VerdictStatus::Inconclusive})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::IoError, "unknown verdict status '" + s + "'");
}

std::string orbit_to_json(const PeriodicOrbit& orbit, int indent) {
  json points = json::array();
  for (const SectionPoint& q : orbit.shooting.points) points.push_back({q[0], q[1]});
  json j;
  j["sequence"] = orbit.sequence.word;
  j["p"] = orbit.sequence.period();
  j["T"] = orbit.T;
  j["points"] = std::move(points);
  j["return_times"] = orbit.shooting.return_times;
  j["residual"] = orbit.residual;
  j["iterations"] = orbit.iterations;
  j["verified"] = orbit.verified.status == VerdictStatus::Existence;
  if (orbit.verified.status != VerdictStatus::Unverified) {
    j["verdict"] = {{"status", to_string(orbit.verified.status)},
                    {"radius", orbit.verified.radius},
                    {"K_width_max", orbit.verified.k_width_max},
                    {"retries", orbit.verified.retries}};
  }
  return j.dump(indent);
}

PeriodicOrbit orbit_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    PeriodicOrbit o;
    o.sequence.word = j.at("sequence").get<std::string>();
    o.T = j.at("T").get<double>();
    for (const json& q : j.at("points")) {
      if (!q.is_array() || q.size() != 2) throw Error(ErrorCode::IoError, "orbit point must be [x, y]");
      o.shooting.points.push_back({q[0].get<double>(), q[1].get<double>()});
    }
    if (j.contains("return_times")) o.shooting.return_times = j["return_times"].get<std::vector<double>>();
    o.residual = j.value("residual", 0.0);
    o.iterations = j.value("iterations", 0);
    if (j.at("p").get<std::size_t>() != o.shooting.points.size() || o.sequence.period() != o.shooting.points.size())
      throw Error(ErrorCode::IoError, "orbit record: p, sequence and points disagree");
    if (j.contains("verdict")) {
      const json& v = j["verdict"];
      o.verified.status = verdict_from_string(v.at("status").get<std::string>());
      o.verified.radius = v.at("radius").get<double>();
      o.verified.k_width_max = v.at("K_width_max").get<double>();
      o.verified.retries = v.at("retries").get<int>();
    }
    return o;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("orbit record: ") + e.what());
  }
}

void write_orbit_json(std::ostream& out, const PeriodicOrbit& orbit) { out << orbit_to_json(orbit) << '\n'; }

PeriodicOrbit read_orbit_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return orbit_from_json(text);
}

void write_census_csv(std::ostream& out, const std::vector<PeriodicOrbit>& orbits) {
  out << "p,T,s\n";
  char buf[64];
  for (const PeriodicOrbit& o : orbits) {
    std::snprintf(buf, sizeof buf, "%zu,%.5f,", o.sequence.period(), o.T);
    out << buf << o.sequence.word << '\n';
  }
}

std::vector<CensusRow> read_census_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("p,T,s", 0) != 0)
    throw Error(ErrorCode::IoError, "census CSV must start with header p,T,s");
  std::vector<CensusRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CensusRow r;
    char word[256] = {};
    if (std::sscanf(line.c_str(), "%zu,%lf,%255s", &r.p, &r.T, word) != 3)
      throw Error(ErrorCode::IoError, "malformed census row: " + line);
    r.s = word;
    if (r.s.size() != r.p) throw Error(ErrorCode::IoError, "census row period disagrees with word: " + line);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace orbitforge
