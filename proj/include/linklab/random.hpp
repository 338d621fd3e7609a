#pragma once

#include "linklab/linalg.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace linklab {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt = 0) {
  return mix_seed(mix_seed(seed ^ mix_seed(salt)) + stream);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt = 0) {
  return Engine(stream_seed(seed, stream, salt));
}

/// Uniform point on the unit sphere S^(m-1) in R^m (normalized Gaussian).
template <class Rng>
Vec uniform_on_sphere(Rng& rng, int m) {
  std::normal_distribution<double> normal;
  Vec u(m);
  double norm = 0.0;
  do {
    for (int j = 0; j < m; ++j) u(j) = normal(rng);
    norm = u.norm();
  } while (norm < 1e-300);
  return u / norm;
}

/// Uniform point in the closed unit ball B^m.
template <class Rng>
Vec uniform_in_ball(Rng& rng, int m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec dir = uniform_on_sphere(rng, m);
  return dir * std::pow(unit(rng), 1.0 / m);
}

template <class Rng>
double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Deterministic batch of m uniform unit vectors on S^k.
inline std::vector<Vec> sample_param(std::uint64_t seed, int k, int m) {
  require(k >= 0 && k + 1 <= kMaxDim, ErrorKind::domain, "sample_param: sphere dimension out of range");
  require(m >= 1, ErrorKind::domain, "sample_param: need at least one sample");
  Engine rng = make_engine(seed, 0, 0x5a3b1e);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) out.push_back(uniform_on_sphere(rng, k + 1));
  return out;
}

/// Conformal concentration of the uniform law on S^k around `mu`.
///
/// A uniform point is stereographically projected from -mu, its chart
/// coordinate is scaled by `s` and mapped back. The image law has density
/// (w.r.t. the normalized uniform measure)
///     g(w) = (2 s / ((1 + s^2) + (s^2 - 1) <mu, w>))^k,
/// the spherical Cauchy family. s = 1 is the identity.
struct ConformalConcentration {
  Vec mu;
  double scale = 1.0;

  template <class Rng>
  Vec sample(Rng& rng) const {
    const int m = static_cast<int>(mu.size());
    const Vec y = uniform_on_sphere(rng, m);
    const double c = mu.dot(y);
    const double denom = 1.0 + c;
    if (denom < 1e-14) return -mu;
    const Vec z = scale * (y - c * mu) / denom;
    const double z2 = z.squaredNorm();
    Vec w = (2.0 * z + (1.0 - z2) * mu) / (1.0 + z2);
    return w / w.norm();
  }

  double density(const Vec& w) const {
    const int k = static_cast<int>(mu.size()) - 1;
    const double s = scale;
    const double base = 2.0 * s / ((1.0 + s * s) + (s * s - 1.0) * mu.dot(w));
    return std::pow(base, k);
  }
};

}  // namespace linklab
