#pragma once

// Crossing words of closed loops against a membrane system: membrane a
// bounded by K1 and membrane b bounded by K2. Each transversal crossing of a
// membrane contributes its letter, with exponent +1 when the loop passes to
// the conormal side.

#include "linklab/catalog.hpp"
#include "linklab/distance.hpp"
#include "linklab/words.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace linklab {

/// Closed curve parametrized by t in [0, 1), extended periodically.
using Loop = std::function<Vec(double)>;

inline Loop loop_of(const EmbeddedSphere& circle) {
  require(circle.sphere_dim() == 1, ErrorKind::domain, "loop_of: need a 1-sphere");
  return [circle](double t) { return loop_point(circle, t - std::floor(t)); };
}

inline Loop reversed(Loop loop) {
  return [loop = std::move(loop)](double t) { return loop(-t); };
}

inline Loop rotated(Loop loop, double shift) {
  return [loop = std::move(loop), shift](double t) { return loop(t + shift); };
}

struct MembraneSystem {
  Membrane a;  // boundary K1, letter a
  Membrane b;  // boundary K2, letter b
};

/// Flat B1 for a and the bump membrane over B2 for b.
inline MembraneSystem default_membrane_system(const Link& link, double height_fraction = 0.2) {
  return {flat_membrane(bounding_balls(link)[0]), bump_membrane(link, default_bump(link, height_fraction))};
}

/// Membrane system used for crossing words: the bump membrane for L(1, n),
/// flat balls for the unlink control.
inline MembraneSystem membrane_system_for(const Link& link, double height_fraction) {
  if (link.family == "U") {
    const auto balls = bounding_balls(link);
    return {flat_membrane(balls[0]), flat_membrane(balls[1])};
  }
  return default_membrane_system(link, height_fraction);
}

struct MembraneCheck {
  std::string name;
  double value = 0.0;
  bool passed = false;
};

struct MembraneValidity {
  std::vector<MembraneCheck> checks;
  bool valid = false;
};

struct MembraneOptions {
  double threshold = 1e-3;
  double rim_tolerance = 1e-8;
  int rim_samples = 1024;
  int budget = 64;
  std::uint64_t seed = 0;
};

namespace detail {

inline double rim_residual(const Membrane& m, const EmbeddedSphere& rim, int samples, std::uint64_t seed) {
  const Patch p = patches_of(m).front();
  Engine rng = make_engine(seed, 0, 0x41b);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec q = uniform_on_sphere(rng, p.param_size());
    worst = std::max(worst, implicit_residual(rim, p.eval(q)));
  }
  return worst;
}

inline Membrane shrunk(Membrane m, double factor) {
  m.base.radii *= factor;
  return m;
}

}  // namespace detail

/// Itemized validity of a membrane system for L(1, n).
inline MembraneValidity validate_membrane_system(const MembraneSystem& sys, const Link& link,
                                                 const MembraneOptions& opt = {}) {
  require(link.i == 1 && link.j == 0, ErrorKind::unsupported, "validate_membrane_system: only defined for L(1, n)");
  require(sys.a.ambient_dim() == link.n && sys.b.ambient_dim() == link.n, ErrorKind::domain,
          "validate_membrane_system: ambient dimensions differ");
  MembraneValidity out;
  auto distance_check = [&](const std::string& name, double d) {
    out.checks.push_back({name, d, d > opt.threshold});
  };
  distance_check("a_b_disjoint", min_distance(sys.a, sys.b, opt.budget, opt.seed).distance);
  distance_check("a_avoids_K2", min_distance(sys.a, link.K2(), opt.budget, opt.seed).distance);
  distance_check("b_avoids_K1", min_distance(sys.b, link.K1(), opt.budget, opt.seed).distance);

  auto rim_check = [&](const std::string& name, const Membrane& m, const EmbeddedSphere& rim) {
    const double residual = detail::rim_residual(m, rim, opt.rim_samples, opt.seed);
    const bool on_rim = m.base.radii.size() == rim.radii.size() && residual < opt.rim_tolerance;
    // Away from the rim the membrane must keep clear of its own boundary.
    const double interior = min_distance(detail::shrunk(m, 0.9), rim, opt.budget, opt.seed).distance;
    out.checks.push_back({name, on_rim ? interior : residual, on_rim && interior > opt.threshold});
  };
  rim_check("a_meets_K1_only_at_rim", sys.a, link.K1());
  rim_check("b_meets_K2_only_at_rim", sys.b, link.K2());

  out.valid = std::all_of(out.checks.begin(), out.checks.end(), [](const MembraneCheck& c) { return c.passed; });
  return out;
}

struct Crossing {
  double t = 0.0;  // loop parameter, in [offset, offset + 1)
  char generator = 'a';
  int exponent = 1;
  double speed = 0.0;  // d(side)/dt at the crossing
  Vec point;
};

struct CrossingResult {
  Word word;  // unreduced, in loop order from `offset`
  std::vector<Crossing> crossings;
  double offset = 0.0;
  int attempts = 0;
};

struct CrossingOptions {
  int samples = 4096;
  int max_attempts = 16;
  double min_speed = 1e-6;
};

namespace detail {

// Appends the crossings of one membrane; false if a sample sits on the
// membrane or a crossing is too slow to count as transversal.
inline bool membrane_crossings(const Loop& loop, const Membrane& m, char generator, double offset,
                               const CrossingOptions& opt, std::vector<Crossing>& out) {
  const Vec normal = m.conormal();
  const int n = opt.samples;
  auto param = [&](int s) { return offset + static_cast<double>(s) / n; };
  auto phi = [&](double t) { return m.side(loop(t), normal); };

  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (int s = 0; s < n; ++s) {
    const Vec x = loop(param(s));
    values[static_cast<std::size_t>(s)] = m.side(x, normal);
    if (std::abs(values[static_cast<std::size_t>(s)]) < 1e-12 && m.footprint(x) <= 1.0) return false;
  }
  values[static_cast<std::size_t>(n)] = values[0];

  for (int s = 0; s < n; ++s) {
    const double lo_value = values[static_cast<std::size_t>(s)];
    const double hi_value = values[static_cast<std::size_t>(s) + 1];
    if ((lo_value < 0.0) == (hi_value < 0.0)) continue;
    double lo = param(s);
    double hi = param(s + 1);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((phi(mid) < 0.0) == (lo_value < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    const Vec x = loop(t);
    if (m.footprint(x) > 1.0) continue;
    const double h = 1e-7;
    const double speed = (phi(t + h) - phi(t - h)) / (2.0 * h);
    if (std::abs(speed) <= opt.min_speed) return false;
    out.push_back({t, generator, hi_value > lo_value ? 1 : -1, speed, x});
  }
  return true;
}

}  // namespace detail

/// Letters read along the loop from its (perturbed) start. Raises a
/// transversality error if no start offset gives clean crossings.
inline CrossingResult crossing_word(const Loop& loop, const MembraneSystem& sys, const CrossingOptions& opt = {}) {
  require(opt.samples >= 16, ErrorKind::domain, "crossing_word: need at least 16 samples");
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    // Offsets stay inside the first sample interval (golden-ratio sequence).
    const double offset = attempt == 0 ? 0.0 : std::fmod(attempt * 0.6180339887498949, 1.0) / opt.samples;
    std::vector<Crossing> crossings;
    if (!detail::membrane_crossings(loop, sys.a, 'a', offset, opt, crossings)) continue;
    if (!detail::membrane_crossings(loop, sys.b, 'b', offset, opt, crossings)) continue;
    std::sort(crossings.begin(), crossings.end(), [](const Crossing& x, const Crossing& y) { return x.t < y.t; });
    CrossingResult out;
    out.offset = offset;
    out.attempts = attempt + 1;
    for (const auto& c : crossings) out.word.letters.push_back({c.generator, c.exponent});
    out.crossings = std::move(crossings);
    return out;
  }
  throw Error(ErrorKind::transversality, "crossing_word: loop is not transversal to the membranes");
}

}  // namespace linklab
