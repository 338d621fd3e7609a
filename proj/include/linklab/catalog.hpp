#pragma once

// Constructors for the three-component convex links L(i, n) and L(i, j, n),
// their spanning balls, the capped half of the third component, the great
// spheres used after lifting to S^n, the two generator loops of the
// fundamental group for i = 1, and graph-of-bump membranes.
//
// Coordinates are 0-based in code: x_1 of the usual notation is axis 0.

#include "linklab/geometry.hpp"
#include "linklab/patch.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace linklab {

/// Radii (not squared radii) of the three components.
/// c1: K1 radius, c2: K2 radius, c3: short axes of K3, c4: long axes of K3.
struct Coefficients {
  double c1 = 2.0;
  double c2 = 3.0;
  double c3 = 1.0;
  double c4 = 4.0;

  bool operator==(const Coefficients&) const = default;
};

inline Coefficients default_coefficients() { return {}; }

/// Radii (1+eps, 1+2eps, 1, 1+3eps): two round spheres and a nearly round third.
inline Coefficients near_round_coefficients(double eps) {
  require(eps > 0.0, ErrorKind::domain, "near_round_coefficients: eps must be positive");
  return {1.0 + eps, 1.0 + 2.0 * eps, 1.0, 1.0 + 3.0 * eps};
}

struct Link {
  std::string family = "L";  // "L": the convex family, "U": far-apart unlink control
  int n = 3;
  int i = 1;
  int j = 0;
  Coefficients coeffs;
  std::array<EmbeddedSphere, 3> components;

  const EmbeddedSphere& K1() const { return components[0]; }
  const EmbeddedSphere& K2() const { return components[1]; }
  const EmbeddedSphere& K3() const { return components[2]; }
};

inline std::vector<int> axis_range(int first, int last_exclusive) {
  std::vector<int> axes;
  for (int a = first; a < last_exclusive; ++a) axes.push_back(a);
  return axes;
}

inline void validate_family(int i, int j, int n, const Coefficients& c) {
  require(n >= 3, ErrorKind::domain, "build_family: need n >= 3");
  require(n + 1 <= kMaxDim, ErrorKind::domain, "build_family: n too large for this build");
  require(j >= 0, ErrorKind::domain, "build_family: need j >= 0");
  require(i >= 1 && i <= n - 2 - j, ErrorKind::domain, "build_family: need 1 <= i <= n-2-j");
  require(c.c3 > 0.0 && c.c3 < c.c1 && c.c1 < c.c2 && c.c2 < c.c4, ErrorKind::domain,
          "build_family: coefficients must satisfy 0 < c3 < c1 < c2 < c4");
}

/// K1: round (n-j-2)-sphere of radius c1 in x_(n-j) = ... = x_n = 0.
/// K2: round (n-i-1)-sphere of radius c2 in x_1 = ... = x_i = 0.
/// K3: (i+j)-ellipsoid, axes x_1..x_i with radius c3 and x_(n-j)..x_n with c4;
///     its last frame vector is e_n so "upper half" means x_n >= 0.
inline Link build_family(int i, int j, int n, const Coefficients& c = {}) {
  validate_family(i, j, n, c);
  Link link;
  link.n = n;
  link.i = i;
  link.j = j;
  link.coeffs = c;

  const Vec origin = Vec::Zero(n);
  const std::vector<int> k1_axes = axis_range(0, n - j - 1);
  const std::vector<int> k2_axes = axis_range(i, n);
  std::vector<int> k3_axes = axis_range(0, i);
  for (int a = n - j - 1; a < n; ++a) k3_axes.push_back(a);

  Vec r1 = Vec::Constant(static_cast<int>(k1_axes.size()), c.c1);
  Vec r2 = Vec::Constant(static_cast<int>(k2_axes.size()), c.c2);
  Vec r3(static_cast<int>(k3_axes.size()));
  for (int a = 0; a < r3.size(); ++a) r3(a) = a < i ? c.c3 : c.c4;

  link.components[0] = make_sphere(origin, axis_frame(n, k1_axes), r1);
  link.components[1] = make_sphere(origin, axis_frame(n, k2_axes), r2);
  link.components[2] = make_sphere(origin, axis_frame(n, k3_axes), r3);
  return link;
}

/// Far-separated round spheres with the dimensions of L(i, n): a genuine
/// unlink used as a negative control.
inline Link unlink_control(int i, int n) {
  require(n >= 3 && n + 1 <= kMaxDim && i >= 1 && i <= n - 2, ErrorKind::domain, "unlink_control: bad (i, n)");
  Link link;
  link.family = "U";
  link.n = n;
  link.i = i;
  link.j = 0;
  link.coeffs = {2.0, 3.0, 1.0, 1.0};
  std::vector<int> k3_axes = axis_range(0, i);
  k3_axes.push_back(n - 1);
  link.components[0] = make_sphere(Vec::Zero(n), axis_frame(n, axis_range(0, n - 1)), Vec::Constant(n - 1, 2.0));
  link.components[1] =
      make_sphere(100.0 * unit_vector(n, 0), axis_frame(n, axis_range(i, n)), Vec::Constant(n - i, 3.0));
  link.components[2] = make_sphere(-100.0 * unit_vector(n, 0), axis_frame(n, k3_axes), Vec::Constant(i + 1, 1.0));
  return link;
}

/// Flat balls bounded by K1, K2, K3 (same frames and radii).
inline std::array<FlatBall, 3> bounding_balls(const Link& link) {
  std::array<FlatBall, 3> balls;
  for (int m = 0; m < 3; ++m) {
    const EmbeddedSphere& k = link.components[m];
    balls[m] = FlatBall{k.center, k.frame, k.radii};
  }
  return balls;
}

/// Upper hemisphere (last frame coordinate >= 0) of `sphere` closed by the flat
/// cap through its equator. The cap orientation extends the hemisphere's
/// boundary orientation, so the two patches form an oriented cycle.
struct CappedSphere {
  EmbeddedSphere sphere;
  FlatBall cap;
  int cap_orientation = 1;

  int ambient_dim() const { return sphere.ambient_dim(); }
  int dim() const { return sphere.sphere_dim(); }
};

inline std::vector<Patch> patches_of(const CappedSphere& c) {
  return {sphere_patch(c.sphere, Domain::hemisphere), ball_patch(c.cap, Domain::ball, c.cap_orientation)};
}

inline CappedSphere capped_sphere(const EmbeddedSphere& sphere) {
  const int k = sphere.sphere_dim();
  require(k >= 1, ErrorKind::domain, "capped_sphere: need sphere dimension >= 1");
  CappedSphere out;
  out.sphere = sphere;
  out.cap = FlatBall{sphere.center, sphere.frame.leftCols(k), sphere.radii.head(k)};
  // The lower hemisphere, flattened onto the cap, has orientation (-1)^(k+1)
  // relative to the cap frame.
  out.cap_orientation = (k % 2 == 1) ? 1 : -1;
  return out;
}

struct CapResult {
  CappedSphere capped;  // K3'
  HalfBall region;      // B3', the part of B3 bounded by K3'
};

inline CapResult cap_upper_half(const Link& link) {
  require(link.j == 0, ErrorKind::unsupported, "cap_upper_half: only defined for the j = 0 family");
  const EmbeddedSphere& k3 = link.K3();
  return {capped_sphere(k3), HalfBall{FlatBall{k3.center, k3.frame, k3.radii}}};
}

/// Largest gap between the hemisphere rim and the cap boundary over `samples`
/// rim directions.
inline double cap_rim_gap(const CappedSphere& c, int samples, std::uint64_t seed) {
  const int k = c.dim();
  Engine rng = make_engine(seed, 0, 0xca9);
  double gap = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec dir = uniform_on_sphere(rng, k);
    Vec u = Vec::Zero(k + 1);
    u.head(k) = dir;
    const Vec on_hemisphere = c.sphere.center + c.sphere.frame * c.sphere.radii.cwiseProduct(u);
    const Vec on_cap = c.cap.center + c.cap.frame * c.cap.radii.cwiseProduct(dir);
    gap = std::max(gap, (on_hemisphere - on_cap).norm());
  }
  return gap;
}

/// Great spheres of the radius-R sphere S^n in R^(n+1) used after lifting.
struct GreatSpheres {
  EmbeddedSphere g2;     // p(K2): axes x_(i+1)..x_n
  EmbeddedSphere g3;     // axes x_1..x_i, x_(n+1)
  EmbeddedSphere sigma;  // axes x_1..x_i, x_n, x_(n+1)
  Vec q_plus;            // (0,...,0, R, 0)
  Vec q_minus;
};

inline GreatSpheres great_spheres(int i, int n, double radius = 3.0) {
  require(n >= 3 && n + 1 <= kMaxDim && i >= 1 && i <= n - 2, ErrorKind::domain, "great_spheres: bad (i, n)");
  require(radius > 0.0, ErrorKind::domain, "great_spheres: radius must be positive");
  const int dim = n + 1;
  const Vec origin = Vec::Zero(dim);
  std::vector<int> g3_axes = axis_range(0, i);
  g3_axes.push_back(n);
  std::vector<int> sigma_axes = axis_range(0, i);
  sigma_axes.push_back(n - 1);
  sigma_axes.push_back(n);
  GreatSpheres out;
  out.g2 = make_sphere(origin, axis_frame(dim, axis_range(i, n)), Vec::Constant(n - i, radius));
  out.g3 = make_sphere(origin, axis_frame(dim, g3_axes), Vec::Constant(i + 1, radius));
  out.sigma = make_sphere(origin, axis_frame(dim, sigma_axes), Vec::Constant(i + 2, radius));
  out.q_plus = radius * unit_vector(dim, n - 1);
  out.q_minus = -out.q_plus;
  return out;
}

struct Segment {
  Vec from;
  Vec to;
  Vec at(double t) const { return from + t * (to - from); }
};

/// Generators of pi_1 of the complement of K1 u K2 in L(1, n), based at 0:
///   alpha(t) = (3 sin 2pi t, 0, ..., 0, 3 - 3 cos 2pi t)
///   beta(t)  = (2 - 2 cos 2pi t, 0, ..., 0, 2 sin 2pi t)
/// and gamma(t) = (t, 0, ..., 0) joining the base point to K3.
struct GeneratorLoops {
  EmbeddedSphere alpha;
  EmbeddedSphere beta;
  Segment gamma;
};

inline GeneratorLoops generator_loops(int n) {
  require(n >= 3 && n <= kMaxDim, ErrorKind::domain, "generator_loops: need n >= 3");
  const Vec e1 = unit_vector(n, 0);
  const Vec en = unit_vector(n, n - 1);
  Mat alpha_frame(n, 2);
  alpha_frame << -en, e1;
  Mat beta_frame(n, 2);
  beta_frame << -e1, en;
  GeneratorLoops out;
  out.alpha = make_sphere(3.0 * en, alpha_frame, Vec::Constant(2, 3.0));
  out.beta = make_sphere(2.0 * e1, beta_frame, Vec::Constant(2, 2.0));
  out.gamma = Segment{Vec::Zero(n), e1};
  return out;
}

/// Point on a 1-sphere at loop parameter t in [0, 1).
inline Vec loop_point(const EmbeddedSphere& loop, double t) {
  Vec u(2);
  u << std::cos(2.0 * std::numbers::pi * t), std::sin(2.0 * std::numbers::pi * t);
  return loop.center + loop.frame * loop.radii.cwiseProduct(u);
}

/// Codimension-one ball with boundary on a link component, optionally pushed
/// off its hyperplane by a radial bump.
struct Membrane {
  FlatBall base;
  std::optional<Bump> bump;
  int orientation = 1;

  int ambient_dim() const { return base.ambient_dim(); }

  /// Unit normal of the base hyperplane. Its sign is fixed so that a loop's
  /// signed crossing count equals its Gauss linking number with the rim.
  Vec conormal() const {
    const int n = base.ambient_dim();
    Mat full = Mat::Zero(n, n);
    full.leftCols(n - 1) = base.frame;
    Eigen::HouseholderQR<Mat> qr(base.frame);
    const Mat q = qr.householderQ() * Mat::Identity(n, n);
    Vec normal = q.col(n - 1);
    full.col(n - 1) = normal;
    if (full.determinant() > 0.0) normal = -normal;
    return orientation >= 0 ? normal : Vec(-normal);
  }

  /// Signed height above the graph, positive on the conormal side.
  double side(const Vec& x, const Vec& normal) const {
    const Vec d = x - base.center;
    double h = d.dot(normal);
    if (bump) {
      const Vec a = base.frame.transpose() * d;
      h -= bump->profile(a.norm()) * bump->direction.dot(normal);
    }
    return h;
  }

  /// Footprint radius of x in units of the rim (<= 1 inside).
  double footprint(const Vec& x) const {
    return frame_coordinates(base.center, base.frame, base.radii, x).norm();
  }
};

inline std::vector<Patch> patches_of(const Membrane& m) {
  Patch p = ball_patch(m.base);
  p.bump = m.bump;
  return {p};
}

inline Membrane flat_membrane(const FlatBall& ball) {
  require(ball.ball_dim() == ball.ambient_dim() - 1, ErrorKind::domain, "membrane: base must have codimension one");
  return Membrane{ball, std::nullopt, 1};
}

struct BumpParameters {
  double height = 2.2;
  double rho_in = 2.2;
  double rho_out = 2.8;
};

/// Bump parameters that scale with the coefficients; (2.2, 2.2, 2.8) for the
/// default radii. `height_fraction` places the plateau between K1 and K2.
inline BumpParameters default_bump(const Link& link, double height_fraction = 0.2) {
  const double c1 = link.coeffs.c1;
  const double gap = link.coeffs.c2 - c1;
  return {c1 + height_fraction * gap, c1 + 0.2 * gap, c1 + 0.8 * gap};
}

/// Graph over B2 of a radial bump pushed along `direction` (must be normal to
/// B2). Height 0 gives B2 itself. Disjointness is not checked here.
inline Membrane bump_membrane(const Link& link, const BumpParameters& bump, const Vec& direction) {
  require(link.family == "L" && link.i == 1 && link.j == 0, ErrorKind::unsupported,
          "bump_membrane: only defined for L(1, n)");
  require(bump.height >= 0.0, ErrorKind::domain, "bump_membrane: height must be non-negative");
  require(bump.rho_in >= 0.0 && bump.rho_in < bump.rho_out && bump.rho_out <= link.coeffs.c2, ErrorKind::domain,
          "bump_membrane: need 0 <= rho_in < rho_out <= c2");
  const FlatBall b2 = bounding_balls(link)[1];
  Membrane m = flat_membrane(b2);
  require(direction.size() == link.n && std::abs(direction.norm() - 1.0) < 1e-12, ErrorKind::domain,
          "bump_membrane: direction must be a unit vector");
  require(std::abs(std::abs(direction.dot(m.conormal())) - 1.0) < 1e-12, ErrorKind::domain,
          "bump_membrane: direction must be normal to B2");
  if (bump.height > 0.0) m.bump = Bump{bump.height, bump.rho_in, bump.rho_out, direction};
  return m;
}

inline Membrane bump_membrane(const Link& link, const BumpParameters& bump) {
  return bump_membrane(link, bump, unit_vector(link.n, 0));
}

}  // namespace linklab
