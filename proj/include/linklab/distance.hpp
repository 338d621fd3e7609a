#pragma once

// Multistart minimum distance between two patch sets. Each start runs a
// projected gradient descent with Barzilai-Borwein steps on
// f = |x_a(q_a) - x_b(q_b)|^2 / 2 over the product of the parameter domains.

#include "linklab/patch.hpp"
#include "linklab/random.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace linklab {

struct LocalMinimum {
  double distance = std::numeric_limits<double>::infinity();
  int patch_a = -1;
  int patch_b = -1;
  Vec param_a;
  Vec param_b;
  Vec point_a;
  Vec point_b;
  double gradient_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
};

struct DistanceResult {
  double distance = std::numeric_limits<double>::infinity();
  Vec witness_a;
  Vec witness_b;
  int patch_a = -1;
  int patch_b = -1;
  Vec param_a;
  Vec param_b;
  double gradient_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
  int starts = 0;
  std::vector<LocalMinimum> minima;  // every start's end point, in start order
};

struct DistanceOptions {
  int budget = 64;
  std::uint64_t seed = 0;
  double gradient_tolerance = 1e-10;
  int max_iterations = 5000;
  bool keep_minima = false;
};

namespace detail {

inline Vec distance_gradient(const Patch& p, const Vec& q, const Vec& residual) {
  Vec g = p.raw_jacobian(q).transpose() * residual;
  if (p.spherical()) g -= g.dot(q) * q;
  return g;
}

inline LocalMinimum descend(const Patch& pa, const Patch& pb, Vec qa, Vec qb, const DistanceOptions& opt) {
  auto value = [&](const Vec& a, const Vec& b, Vec& xa, Vec& xb) {
    xa = pa.eval(a);
    xb = pb.eval(b);
    return 0.5 * (xa - xb).squaredNorm();
  };

  Vec xa, xb;
  double f = value(qa, qb, xa, xb);
  Vec ga = distance_gradient(pa, qa, xa - xb);
  Vec gb = distance_gradient(pb, qb, xb - xa);

  auto projected_gradient = [&]() {
    return std::sqrt((qa - pa.project(qa - ga)).squaredNorm() + (qb - pb.project(qb - gb)).squaredNorm());
  };

  const double lipschitz = (pa.raw_jacobian(qa).squaredNorm() + pb.raw_jacobian(qb).squaredNorm());
  double step = 1.0 / std::max(lipschitz, 1e-12);
  double pg = projected_gradient();
  int stalls = 0;

  for (int it = 0; it < opt.max_iterations && pg >= opt.gradient_tolerance; ++it) {
    Vec na, nb, nxa, nxb;
    double nf = 0.0;
    bool accepted = false;
    double trial = step;
    for (int halving = 0; halving < 60; ++halving) {
      na = pa.project(qa - trial * ga);
      nb = pb.project(qb - trial * gb);
      nf = value(na, nb, nxa, nxb);
      const double moved = (na - qa).squaredNorm() + (nb - qb).squaredNorm();
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + f);
      if (nf <= f - 1e-4 * moved / trial || (nf <= f + slack && moved < 1e-24)) {
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) {
      if (++stalls > 3) break;
      step = 1.0 / std::max(lipschitz, 1e-12);
      continue;
    }
    const Vec nga = distance_gradient(pa, na, nxa - nxb);
    const Vec ngb = distance_gradient(pb, nb, nxb - nxa);
    const double ss = (na - qa).squaredNorm() + (nb - qb).squaredNorm();
    const double sy = (na - qa).dot(nga - ga) + (nb - qb).dot(ngb - gb);
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e6) : std::min(2.0 * trial, 1e6);
    qa = na;
    qb = nb;
    xa = nxa;
    xb = nxb;
    f = nf;
    ga = nga;
    gb = ngb;
    pg = projected_gradient();
  }

  LocalMinimum out;
  out.distance = (xa - xb).norm();
  out.param_a = qa;
  out.param_b = qb;
  out.point_a = xa;
  out.point_b = xb;
  out.gradient_norm = pg;
  out.converged = pg < opt.gradient_tolerance;
  return out;
}

}  // namespace detail

/// Smallest distance found between two shapes. Starts are seeded per index, so
/// raising the budget only adds starts and the result never increases.
template <class ShapeA, class ShapeB>
DistanceResult min_distance(const ShapeA& a, const ShapeB& b, const DistanceOptions& opt = {}) {
  const std::vector<Patch> pas = patches_of(a);
  const std::vector<Patch> pbs = patches_of(b);
  require(!pas.empty() && !pbs.empty(), ErrorKind::domain, "min_distance: empty shape");
  require(pas.front().ambient_dim() == pbs.front().ambient_dim(), ErrorKind::domain,
          "min_distance: ambient dimensions differ");
  require(opt.budget >= 1, ErrorKind::domain, "min_distance: budget must be positive");

  DistanceResult best;
  for (int start = 0; start < opt.budget; ++start) {
    for (std::size_t ia = 0; ia < pas.size(); ++ia) {
      for (std::size_t ib = 0; ib < pbs.size(); ++ib) {
        Engine rng = make_engine(opt.seed, static_cast<std::uint64_t>(start), 0xd15700 + 16 * ia + ib);
        Vec qa = pas[ia].sample(rng);
        Vec qb = pbs[ib].sample(rng);
        LocalMinimum local = detail::descend(pas[ia], pbs[ib], std::move(qa), std::move(qb), opt);
        local.patch_a = static_cast<int>(ia);
        local.patch_b = static_cast<int>(ib);
        if (local.distance < best.distance) {
          best.distance = local.distance;
          best.witness_a = local.point_a;
          best.witness_b = local.point_b;
          best.patch_a = local.patch_a;
          best.patch_b = local.patch_b;
          best.param_a = local.param_a;
          best.param_b = local.param_b;
          best.gradient_norm = local.gradient_norm;
          best.converged = local.converged;
        }
        if (opt.keep_minima) best.minima.push_back(std::move(local));
      }
    }
    ++best.starts;
  }
  return best;
}

template <class ShapeA, class ShapeB>
DistanceResult min_distance(const ShapeA& a, const ShapeB& b, int budget, std::uint64_t seed) {
  DistanceOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  return min_distance(a, b, opt);
}

}  // namespace linklab
