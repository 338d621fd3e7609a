#pragma once

// Affinely embedded round and ellipsoidal spheres and flat balls, plus the
// point maps used by the linking arguments: stereographic lift, the
// reflection x_n -> |x_n|, and the retraction of a sphere minus a great
// sphere onto the complementary great sphere.

#include "linklab/linalg.hpp"

#include <string>
#include <utility>

namespace linklab {

inline constexpr double kFrameTolerance = 1e-12;
inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kGeometricResidual = 1e-10;

/// Point set { center + sum_j radii_j u_j frame_j : |u| = 1 }.
/// The orientation is the one induced by the frame order.
struct EmbeddedSphere {
  Vec center;
  Mat frame;  // n x (k+1), orthonormal columns
  Vec radii;  // k+1 semi-axes

  int ambient_dim() const { return static_cast<int>(center.size()); }
  int sphere_dim() const { return static_cast<int>(radii.size()) - 1; }
};

/// Point set { center + sum_j radii_j u_j frame_j : |u| <= 1 }.
struct FlatBall {
  Vec center;
  Mat frame;
  Vec radii;

  int ambient_dim() const { return static_cast<int>(center.size()); }
  int ball_dim() const { return static_cast<int>(radii.size()); }
  EmbeddedSphere boundary() const { return {center, frame, radii}; }
};

/// The part of a FlatBall whose last frame coordinate is >= 0.
struct HalfBall {
  FlatBall ball;

  int ambient_dim() const { return ball.ambient_dim(); }
  int ball_dim() const { return ball.ball_dim(); }
};

inline void validate_frame(const Vec& center, const Mat& frame, const Vec& radii, const char* what) {
  const std::string name(what);
  require(center.size() >= 1 && center.size() <= kMaxDim, ErrorKind::domain, name + ": ambient dimension out of range");
  require(frame.rows() == center.size(), ErrorKind::domain, name + ": frame rows must equal ambient dimension");
  require(frame.cols() == radii.size() && radii.size() >= 1, ErrorKind::domain, name + ": frame/radii size mismatch");
  require(radii.size() <= center.size(), ErrorKind::domain, name + ": k+1 must not exceed n");
  require(center.allFinite() && frame.allFinite() && radii.allFinite(), ErrorKind::domain, name + ": non-finite data");
  require((radii.array() > 0.0).all(), ErrorKind::domain, name + ": radii must be positive");
  const Mat gram = frame.transpose() * frame;
  const double defect = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  require(defect <= kFrameTolerance, ErrorKind::domain, name + ": frame is not orthonormal");
}

inline EmbeddedSphere make_sphere(Vec center, Mat frame, Vec radii) {
  validate_frame(center, frame, radii, "EmbeddedSphere");
  return {std::move(center), std::move(frame), std::move(radii)};
}

inline FlatBall make_ball(Vec center, Mat frame, Vec radii) {
  validate_frame(center, frame, radii, "FlatBall");
  return {std::move(center), std::move(frame), std::move(radii)};
}

/// Coordinate frame made of the listed axes of R^n.
template <class Axes>
Mat axis_frame(int n, const Axes& axes) {
  Mat frame = Mat::Zero(n, static_cast<int>(std::size(axes)));
  int col = 0;
  for (int axis : axes) frame(axis, col++) = 1.0;
  return frame;
}

inline Vec embed(const EmbeddedSphere& sphere, const Vec& u) {
  require(u.size() == sphere.radii.size(), ErrorKind::domain, "embed: parameter has wrong dimension");
  require(std::abs(u.norm() - 1.0) <= kUnitTolerance, ErrorKind::domain, "embed: parameter is not a unit vector");
  return sphere.center + sphere.frame * sphere.radii.cwiseProduct(u);
}

/// k tangent vectors at embed(u): images of the oriented orthonormal tangent
/// basis of the parameter sphere under the scaled frame map.
inline Mat embed_jacobian(const EmbeddedSphere& sphere, const Vec& u) {
  require(u.size() == sphere.radii.size(), ErrorKind::domain, "embed_jacobian: parameter has wrong dimension");
  require(std::abs(u.norm() - 1.0) <= kUnitTolerance, ErrorKind::domain, "embed_jacobian: parameter is not a unit vector");
  return sphere.frame * sphere.radii.asDiagonal() * tangent_basis(u);
}

/// Scaled frame coordinates of x, i.e. the u with x = center + F diag(r) u
/// when x lies in the affine span.
inline Vec frame_coordinates(const Vec& center, const Mat& frame, const Vec& radii, const Vec& x) {
  return (frame.transpose() * (x - center)).cwiseQuotient(radii);
}

/// Quadric residual |sum (a_j/r_j)^2 - 1| plus the distance of x from the
/// affine span of the sphere.
inline double implicit_residual(const EmbeddedSphere& sphere, const Vec& x) {
  const Vec d = x - sphere.center;
  const Vec a = sphere.frame.transpose() * d;
  const double off = (d - sphere.frame * a).norm();
  return std::abs(a.cwiseQuotient(sphere.radii).squaredNorm() - 1.0) + off;
}

/// Distance of x from the affine span plus how far it sits outside the ball.
inline double ball_residual(const FlatBall& ball, const Vec& x) {
  const Vec d = x - ball.center;
  const Vec a = ball.frame.transpose() * d;
  const double off = (d - ball.frame * a).norm();
  return std::max(0.0, a.cwiseQuotient(ball.radii).squaredNorm() - 1.0) + off;
}

/// Stereographic lift of R^n onto the n-sphere of radius R in R^(n+1),
/// projecting from the pole (0,...,0,R). |x| = R is fixed.
inline Vec stereographic_lift(const Vec& x, double radius) {
  require(x.allFinite(), ErrorKind::domain, "stereographic_lift: non-finite point");
  require(radius > 0.0, ErrorKind::domain, "stereographic_lift: radius must be positive");
  require(x.size() + 1 <= kMaxDim, ErrorKind::domain, "stereographic_lift: dimension too large");
  const int n = static_cast<int>(x.size());
  const double r2 = radius * radius;
  const double s = x.squaredNorm();
  Vec out(n + 1);
  out.head(n) = (2.0 * r2 / (s + r2)) * x;
  out(n) = radius * (s - r2) / (s + r2);
  return out;
}

/// Derivative of stereographic_lift, an (n+1) x n matrix.
inline Mat stereographic_lift_jacobian(const Vec& x, double radius) {
  const int n = static_cast<int>(x.size());
  const double r2 = radius * radius;
  const double s = x.squaredNorm();
  const double q = s + r2;
  const double t = 2.0 * r2 / q;
  Mat jac(n + 1, n);
  jac.topRows(n) = t * Mat::Identity(n, n) - (4.0 * r2 / (q * q)) * x * x.transpose();
  jac.row(n) = (4.0 * r2 * radius / (q * q)) * x.transpose();
  return jac;
}

inline Vec reflect_abs(Vec x) {
  if (x.size() > 0) x(x.size() - 1) = std::abs(x(x.size() - 1));
  return x;
}

/// Retraction of S^n - (V cap S^n) onto (V^perp cap S^n): project out V and
/// rescale to the radius of x. `subspace` holds a basis of V in its columns.
inline Vec retract_complement(const Vec& x, const Mat& subspace) {
  require(subspace.rows() == x.size(), ErrorKind::domain, "retract_complement: basis has wrong row count");
  const double radius = x.norm();
  require(radius > 0.0, ErrorKind::domain, "retract_complement: point must lie on a sphere of positive radius");
  Vec residual = x;
  if (subspace.cols() > 0) {
    const Mat q = orthonormal_columns(subspace);
    residual = x - q * (q.transpose() * x);
  }
  const double norm = residual.norm();
  require(norm > 1e-9, ErrorKind::singular_input, "retract_complement: point lies on the deleted great sphere");
  return radius * residual / norm;
}

}  // namespace linklab
