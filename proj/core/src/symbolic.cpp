#include "orbitforge/symbolic.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>

namespace orbitforge {

void SectionConfig::validate() const {
  if (direction != 1 && direction != -1) throw Error(ErrorCode::InvalidArgument, "section direction must be +1 or -1");
  if (!std::isfinite(plane_z)) throw Error(ErrorCode::InvalidArgument, "section plane must be finite");
}

Crossing refine_crossing(const State3& s, double t, double dt, const LorenzParams& p, const SectionConfig& cfg,
                         std::size_t sample) {
  return refine_crossing([&](const State3& x, double h) { return rk4_step(x, p, h); },
                         [&](const State3& x) { return rhs(x, p); }, s, t, dt, cfg, sample);
}

std::vector<Crossing> crossings(const Trajectory& traj, const LorenzParams& p, const SectionConfig& cfg) {
  cfg.validate();
  std::vector<Crossing> out;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k)
    if (cfg.brackets(traj.samples[k], traj.samples[k + 1]))
      out.push_back(refine_crossing(traj.samples[k], traj.time(k), traj.dt, p, cfg, k));
  return out;
}

SymbolSequence label_arc(const std::vector<Crossing>& all, std::size_t start, std::size_t end) {
  SymbolSequence seq;
  for (const Crossing& c : all)
    if (c.sample >= start && c.sample < end) seq.word.push_back(c.label);
  if (seq.word.empty()) throw Error(ErrorCode::NoCrossings, "arc does not cross the section");
  return seq;
}

SymbolSequence label_arc(const Trajectory& traj, const LorenzParams& p, std::size_t start, std::size_t end,
                         const SectionConfig& cfg) {
  return label_arc(crossings(traj, p, cfg), start, end);
}

SymbolSequence canonicalize(std::string_view word) {
  if (word.empty()) throw Error(ErrorCode::NotPeriodicRepetition, "empty symbol word");
  if (word.find_first_not_of("LR") != std::string_view::npos)
    throw Error(ErrorCode::NotPeriodicRepetition, "symbol word must use only L and R: " + std::string(word));
  const std::size_t n = word.size();
  std::size_t root = n;
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = word[i] == word[i - d];
    if (repeats) {
      root = d;
      break;
    }
  }
  const std::string base(word.substr(0, root));
  std::string best = base;
  for (std::size_t k = 1; k < root; ++k) {
    std::string rot = base.substr(k) + base.substr(0, k);
    if (rot < best) best = std::move(rot);
  }
  return {best};
}

SymbolSequence mirror(const SymbolSequence& seq) {
  std::string w = seq.word;
  for (char& c : w) c = c == 'L' ? 'R' : 'L';
  return canonicalize(w);
}

SymbolSequence census_representative(const SymbolSequence& seq) {
  const SymbolSequence a = canonicalize(seq.word);
  const SymbolSequence b = mirror(a);
  const auto nl = [](const SymbolSequence& s) { return std::count(s.word.begin(), s.word.end(), 'L'); };
  if (nl(a) != nl(b)) return nl(a) > nl(b) ? a : b;
  return std::min(a, b);
}

std::vector<SymbolSequence> enumerate_candidates(std::size_t p_max) {
  if (p_max < 2) throw Error(ErrorCode::InvalidArgument, "p_max must be at least 2");
  if (p_max > 24) throw Error(ErrorCode::InvalidArgument, "p_max above 24 is not supported");
  std::vector<SymbolSequence> out;
  for (std::size_t p = 2; p <= p_max; ++p) {
    std::set<std::string> reps;
    for (std::size_t bits = 0; bits < (std::size_t{1} << p); ++bits) {
      std::string w(p, 'L');
      for (std::size_t i = 0; i < p; ++i)
        if (bits >> (p - 1 - i) & 1U) w[i] = 'R';
      const SymbolSequence c = canonicalize(w);
      if (c.period() != p) continue;
      reps.insert(census_representative(c).word);
    }
    for (const auto& w : reps) out.push_back({w});
  }
  return out;
}

void write_crossings_csv(std::ostream& out, const std::vector<Crossing>& cs) {
  out << "t,x,y,label\n";
  char buf[128];
  for (const Crossing& c : cs) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%c\n", c.t, c.point.x, c.point.y, c.label);
    out << buf;
  }
}

std::vector<Crossing> read_crossings_csv(std::istream& in, double plane_z) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,y,label", 0) != 0)
    throw Error(ErrorCode::IoError, "crossing CSV header mismatch");
  std::vector<Crossing> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Crossing c;
    c.point.z = plane_z;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%c", &c.t, &c.point.x, &c.point.y, &c.label) != 4 ||
        (c.label != 'L' && c.label != 'R'))
      throw Error(ErrorCode::IoError, "malformed crossing row: " + line);
    out.push_back(c);
  }
  return out;
}

}  // namespace orbitforge
