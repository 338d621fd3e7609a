#pragma once

// Small dense linear algebra shared by every linklab module.
//
// All ambient dimensions in this library are tiny (n <= 11, plus one for the
// lifted sphere), so vectors and matrices use Eigen's dynamic-size storage
// with a fixed upper bound. That keeps them on the stack inside hot loops.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace linklab {

inline constexpr int kMaxDim = 12;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

enum class ErrorKind {
  domain,
  singular_input,
  unsupported,
  regular_value_failure,
  transversality,
  inconclusive,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::singular_input: return "singular_input";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::regular_value_failure: return "regular_value_failure";
    case ErrorKind::transversality: return "transversality";
    case ErrorKind::inconclusive: return "inconclusive";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

inline Vec unit_vector(int n, int axis) {
  Vec e = Vec::Zero(n);
  e(axis) = 1.0;
  return e;
}

/// Surface measure of the round unit m-sphere, 2 pi^((m+1)/2) / Gamma((m+1)/2).
/// Vol(S^0) = 2 (counting measure on two points).
inline double sphere_volume(int m) {
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// Volume of the unit m-ball.
inline double ball_volume(int m) {
  const double h = 0.5 * m;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

/// Orthonormal basis E of the complement of the unit vector u, oriented so that
/// det[u | E] > 0. This is the boundary orientation of the unit sphere
/// (outward normal first). Built from one Householder reflection, no pivoting
/// decisions beyond the largest entry of u.
inline Mat tangent_basis(const Vec& u) {
  const int m = static_cast<int>(u.size());
  int k = 0;
  u.cwiseAbs().maxCoeff(&k);
  const double sigma = u(k) >= 0.0 ? 1.0 : -1.0;
  Vec w = u;
  w(k) += sigma;
  const double ww = w.squaredNorm();
  Mat basis(m, m - 1);
  int col = 0;
  for (int j = 0; j < m; ++j) {
    if (j == k) continue;
    Vec h = -2.0 * w(j) / ww * w;
    h(j) += 1.0;
    basis.col(col++) = h;
  }
  // H e_k = -sigma u and det H = -1, hence det[u | E] = sigma (-1)^k.
  const double sign = (k % 2 == 0) ? sigma : -sigma;
  if (sign < 0.0 && m >= 2) basis.col(m - 2) *= -1.0;
  return basis;
}

/// Orthonormalizes the columns of a (full column rank) matrix.
inline Mat orthonormal_columns(const Mat& a) {
  if (a.cols() == 0) return a;
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(a.rows(), a.cols());
  return q;
}

inline double smallest_singular_value(const Mat& a) {
  if (a.cols() == 0 || a.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

/// Columns of `a` scaled to unit length (zero columns left alone).
inline Mat normalized_columns(Mat a) {
  for (int j = 0; j < a.cols(); ++j) {
    const double norm = a.col(j).norm();
    if (norm > 0.0) a.col(j) /= norm;
  }
  return a;
}

}  // namespace linklab
