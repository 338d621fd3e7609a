#pragma once

// Parametrized patches: the common currency of the distance, intersection,
// degree and parity algorithms. Every geometric object in the catalog
// decomposes into a short list of patches.
//
//   sphere      u in S^(m-1)                     dim m-1
//   hemisphere  u in S^(m-1), u_(m-1) >= 0       dim m-1
//   ball        v in B^m                         dim m
//   half_ball   v in B^m, v_(m-1) >= 0           dim m
//
// A ball patch may carry a radial bump (graph displacement along a fixed
// direction), and any patch may be composed with the stereographic lift.

#include "linklab/geometry.hpp"
#include "linklab/random.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace linklab {

enum class Domain { sphere, hemisphere, ball, half_ball };

/// Radial C^1 bump: `height` up to radius rho_in, cubic smoothstep down to 0
/// at rho_out.
struct Bump {
  double height = 0.0;
  double rho_in = 0.0;
  double rho_out = 0.0;
  Vec direction;

  double profile(double rho) const {
    if (rho <= rho_in) return height;
    if (rho >= rho_out) return 0.0;
    const double t = (rho - rho_in) / (rho_out - rho_in);
    return height * (1.0 - t * t * (3.0 - 2.0 * t));
  }

  double slope(double rho) const {
    if (rho <= rho_in || rho >= rho_out) return 0.0;
    const double w = rho_out - rho_in;
    const double t = (rho - rho_in) / w;
    return -height * 6.0 * t * (1.0 - t) / w;
  }
};

struct Patch {
  Domain domain = Domain::sphere;
  Vec center;
  Mat frame;
  Vec radii;
  int orientation = 1;
  std::optional<Bump> bump;
  double lift_radius = 0.0;

  bool spherical() const { return domain == Domain::sphere || domain == Domain::hemisphere; }
  int param_size() const { return static_cast<int>(radii.size()); }
  int dim() const { return spherical() ? param_size() - 1 : param_size(); }
  int base_dim() const { return static_cast<int>(center.size()); }
  int ambient_dim() const { return base_dim() + (lift_radius > 0.0 ? 1 : 0); }

  Vec eval_base(const Vec& q) const {
    Vec x = center + frame * radii.cwiseProduct(q);
    if (bump) x += bump->profile(radius_of(q)) * bump->direction;
    return x;
  }

  Vec eval(const Vec& q) const {
    const Vec x = eval_base(q);
    return lift_radius > 0.0 ? stereographic_lift(x, lift_radius) : x;
  }

  /// Derivative of eval with respect to the raw parameter vector (ambient x m).
  Mat raw_jacobian(const Vec& q) const {
    Mat jac = frame * radii.asDiagonal();
    if (bump) {
      const double rho = radius_of(q);
      const double ds = bump->slope(rho);
      if (ds != 0.0 && rho > 0.0) {
        const Vec drho = radii.cwiseProduct(radii).cwiseProduct(q) / rho;
        jac += bump->direction * (ds * drho).transpose();
      }
    }
    if (lift_radius > 0.0) return stereographic_lift_jacobian(eval_base(q), lift_radius) * jac;
    return jac;
  }

  /// dim() tangent vectors at eval(q); positively oriented up to orientation_at.
  Mat tangents(const Vec& q) const {
    if (spherical()) return raw_jacobian(q) * tangent_basis(q);
    return raw_jacobian(q);
  }

  /// Orientation multiplier of the tangent frame at q. For 0-spheres this is
  /// the sign of the point (boundary orientation of [-1, 1]).
  double orientation_at(const Vec& q) const {
    double sign = orientation >= 0 ? 1.0 : -1.0;
    if (spherical() && param_size() == 1) sign *= q(0) >= 0.0 ? 1.0 : -1.0;
    return sign;
  }

  /// Nearest admissible parameter.
  Vec project(Vec q) const {
    const int m = param_size();
    if (domain == Domain::hemisphere || domain == Domain::half_ball) q(m - 1) = std::max(0.0, q(m - 1));
    const double norm = q.norm();
    if (spherical()) {
      if (norm < 1e-300) return domain == Domain::hemisphere ? unit_vector(m, m - 1) : unit_vector(m, 0);
      return q / norm;
    }
    if (norm > 1.0) q /= norm;
    return q;
  }

  /// Parameter retraction after a step expressed in the chart's tangent basis.
  Vec retract(const Vec& q, const Vec& step) const {
    if (spherical()) {
      const Vec moved = q + tangent_basis(q) * step;
      return moved / moved.norm();
    }
    return q + step;
  }

  /// Domain membership; tol > 0 admits a little slack, tol < 0 demands interior.
  bool contains(const Vec& q, double tol = 0.0) const {
    const int m = param_size();
    if (domain == Domain::hemisphere || domain == Domain::half_ball) {
      if (q(m - 1) < -tol) return false;
    }
    if (!spherical() && q.norm() > 1.0 + tol) return false;
    return true;
  }

  /// How far q sits from the boundary of its domain (infinite for spheres).
  double boundary_margin(const Vec& q) const {
    const int m = param_size();
    double margin = std::numeric_limits<double>::infinity();
    if (domain == Domain::hemisphere || domain == Domain::half_ball) margin = std::min(margin, q(m - 1));
    if (!spherical()) margin = std::min(margin, 1.0 - q.norm());
    return margin;
  }

  double measure() const {
    const int m = param_size();
    double vol = spherical() ? sphere_volume(m - 1) : ball_volume(m);
    if (domain == Domain::hemisphere || domain == Domain::half_ball) vol *= 0.5;
    return vol;
  }

  /// Parameter uniform with respect to measure().
  template <class Rng>
  Vec sample(Rng& rng) const {
    const int m = param_size();
    Vec q = spherical() ? uniform_on_sphere(rng, m) : uniform_in_ball(rng, m);
    if (domain == Domain::hemisphere || domain == Domain::half_ball) q(m - 1) = std::abs(q(m - 1));
    return q;
  }

 private:
  double radius_of(const Vec& q) const { return radii.cwiseProduct(q).norm(); }
};

inline Patch sphere_patch(const EmbeddedSphere& s, Domain domain = Domain::sphere, int orientation = 1) {
  return {domain, s.center, s.frame, s.radii, orientation, std::nullopt, 0.0};
}

inline Patch ball_patch(const FlatBall& b, Domain domain = Domain::ball, int orientation = 1) {
  return {domain, b.center, b.frame, b.radii, orientation, std::nullopt, 0.0};
}

inline std::vector<Patch> patches_of(const EmbeddedSphere& s) { return {sphere_patch(s)}; }
inline std::vector<Patch> patches_of(const FlatBall& b) { return {ball_patch(b)}; }
inline std::vector<Patch> patches_of(const HalfBall& b) { return {ball_patch(b.ball, Domain::half_ball)}; }
inline std::vector<Patch> patches_of(const Patch& p) { return {p}; }
inline std::vector<Patch> patches_of(const std::vector<Patch>& p) { return p; }

/// The same patches composed with the stereographic lift of radius R.
inline std::vector<Patch> lifted(std::vector<Patch> patches, double radius) {
  for (auto& p : patches) p.lift_radius = radius;
  return patches;
}

template <class Shape>
int shape_dim(const Shape& shape) {
  return patches_of(shape).front().dim();
}

template <class Shape>
int shape_ambient_dim(const Shape& shape) {
  return patches_of(shape).front().ambient_dim();
}

}  // namespace linklab
