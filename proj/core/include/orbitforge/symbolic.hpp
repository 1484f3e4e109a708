#pragma once

// Poincare section crossings and L/R symbol sequences.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "orbitforge/error.hpp"
#include "orbitforge/integrate.hpp"

namespace orbitforge {

// The plane z = plane_z, crossed in the direction sign(zdot) == direction.
struct SectionConfig {
  double plane_z = 27.0;
  int direction = -1;

  // Throws Error(InvalidArgument) unless direction is +1 or -1.
  void validate() const;
  // Signed height, positive once the plane has been crossed in the configured direction.
  double side(const State3& s) const noexcept { return direction * (s.z - plane_z); }
  // True when the step a -> b crosses the plane in the configured direction.
  bool brackets(const State3& a, const State3& b) const noexcept { return side(a) < 0.0 && side(b) >= 0.0; }
};

inline constexpr double kCrossingTolerance = 1e-12;
inline constexpr double kTangentialSpeed = 1e-8;

struct Crossing {
  double t = 0.0;
  State3 point;
  char label = 'L';
  // Sample index k of the bracketing step k -> k + 1.
  std::size_t sample = 0;
};

// L when the trajectory is on the x < 0 wing, R on the x > 0 wing. On the
// section the wing is read off the direction of xdot = sigma (y - x), which
// tells the two wings apart even where a switching orbit crosses near x = 0.
constexpr char crossing_label(const State3& s) { return s.y > s.x ? 'L' : 'R'; }

// Finds h in (0, dt] where step(s, h) meets the plane, given that step(s, dt)
// lies past it. Newton on the substep length guarded by bisection, until
// |z - plane_z| < kCrossingTolerance. field(state) is the vector field, used
// for the Newton slope and the transversality check.
template <class Step, class Field>
Crossing refine_crossing(Step&& step, Field&& field, const State3& s, double t, double dt, const SectionConfig& cfg,
                         std::size_t sample) {
  double lo = 0.0;
  double hi = dt;
  double h = dt * (-cfg.side(s)) / (cfg.side(step(s, dt)) - cfg.side(s));
  State3 x = step(s, h);
  for (int it = 0; it < 200; ++it) {
    const double g = cfg.side(x);
    if (std::fabs(x.z - cfg.plane_z) < kCrossingTolerance) break;
    if (g < 0.0)
      lo = h;
    else
      hi = h;
    const double slope = cfg.direction * field(x).z;
    double next = slope != 0.0 ? h - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == h) break;
    h = next;
    x = step(s, h);
  }
  if (std::fabs(field(x).z) < kTangentialSpeed)
    throw Error(ErrorCode::TangentialCrossing, "trajectory touches the section plane tangentially");
  return {t + h, x, crossing_label(x), sample};
}

// Refines one bracketing RK4 step of the Lorenz flow.
Crossing refine_crossing(const State3& s, double t, double dt, const LorenzParams& p, const SectionConfig& cfg,
                         std::size_t sample);

// All crossings of a sampled trajectory, in time order.
std::vector<Crossing> crossings(const Trajectory& traj, const LorenzParams& p, const SectionConfig& cfg);

// Cyclic word over {L, R}.
struct SymbolSequence {
  std::string word;

  std::size_t period() const noexcept { return word.size(); }
  friend bool operator==(const SymbolSequence&, const SymbolSequence&) = default;
  friend auto operator<=>(const SymbolSequence&, const SymbolSequence&) = default;
};

// Raw labels of the crossings whose bracketing sample lies in [start, end).
// Throws Error(NoCrossings) when there are none.
SymbolSequence label_arc(const std::vector<Crossing>& all, std::size_t start, std::size_t end);
SymbolSequence label_arc(const Trajectory& traj, const LorenzParams& p, std::size_t start, std::size_t end,
                         const SectionConfig& cfg);

// Primitive root, then the lexicographically least rotation (L < R).
// Throws Error(NotPeriodicRepetition) for words that are empty or not over {L, R}.
SymbolSequence canonicalize(std::string_view word);

// L <-> R swapped, canonicalized.
SymbolSequence mirror(const SymbolSequence& seq);

// The member of {seq, mirror(seq)} listed in a census: more L than R, ties to
// the lexicographically smaller word.
SymbolSequence census_representative(const SymbolSequence& seq);

// One representative per rotation/mirror class of primitive words with
// period 2..p_max, ordered by period then word.
std::vector<SymbolSequence> enumerate_candidates(std::size_t p_max);

// CSV with header "t,x,y,label".
void write_crossings_csv(std::ostream& out, const std::vector<Crossing>& cs);
std::vector<Crossing> read_crossings_csv(std::istream& in, double plane_z);

}  // namespace orbitforge
