#pragma once

// Intersection certificates: multistart Newton on x_A(q_a) = x_B(q_b) over the
// product of patch domains, split certificates from the bounding balls, and
// the separation parity of two antipodal points by a great arc.

#include "linklab/catalog.hpp"
#include "linklab/distance.hpp"
#include "linklab/patch.hpp"
#include "linklab/random.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace linklab {

struct IntersectionReport {
  std::vector<Vec> points;
  std::vector<double> margins;    // smallest singular value of [T_A | T_B], orthonormalized
  std::vector<double> residuals;  // |x_A - x_B| at each root
  std::vector<int> patch_a;
  std::vector<int> patch_b;
  double tolerance = 0.0;
  bool certified = false;  // every root transversal (margin >= tolerance)

  std::size_t size() const { return points.size(); }
};

struct IntersectionOptions {
  int starts = 256;
  std::uint64_t seed = 0;
  int max_iterations = 60;
  double dedupe_radius = 1e-6;
  double tolerance = 1e-6;
};

namespace detail {

struct JointRoot {
  bool converged = false;
  Vec qa, qb;
  double residual = 0.0;
};

/// Damped Gauss-Newton for x_A(q_a) - x_B(q_b) = 0 in chart coordinates.
inline JointRoot joint_newton(const Patch& pa, const Patch& pb, Vec qa, Vec qb, int max_iterations) {
  const int da = pa.dim();
  const int db = pb.dim();
  Vec f = pa.eval(qa) - pb.eval(qb);
  double fn = f.norm();
  JointRoot out;
  for (int it = 0; it < max_iterations; ++it) {
    const double scale = 1.0 + pa.eval(qa).norm();
    if (fn < 1e-13 * scale) break;
    Mat jac(f.size(), da + db);
    jac.leftCols(da) = pa.tangents(qa);
    jac.rightCols(db) = -pb.tangents(qb);
    const Vec delta = jac.colPivHouseholderQr().solve(-f);
    if (!delta.allFinite()) break;
    double t = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Vec na = pa.retract(qa, t * delta.head(da));
      const Vec nb = pb.retract(qb, t * delta.tail(db));
      const Vec nf = pa.eval(na) - pb.eval(nb);
      if (nf.norm() < (1.0 - 1e-4 * t) * fn) {
        qa = na;
        qb = nb;
        f = nf;
        fn = nf.norm();
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  out.converged = fn < 1e-11 * (1.0 + pa.eval(qa).norm());
  out.qa = qa;
  out.qb = qb;
  out.residual = fn;
  return out;
}

inline double transversality_margin(const Mat& ta, const Mat& tb) {
  Mat both(ta.rows(), ta.cols() + tb.cols());
  both.leftCols(ta.cols()) = orthonormal_columns(ta);
  both.rightCols(tb.cols()) = orthonormal_columns(tb);
  return smallest_singular_value(both);
}

/// All roots of x_A = x_B found by multistart, deduplicated by position.
/// `boundary` collects the smallest domain margin seen on each root.
inline IntersectionReport patch_intersections(const std::vector<Patch>& pas, const std::vector<Patch>& pbs,
                                              const IntersectionOptions& opt, std::vector<double>* boundary = nullptr) {
  IntersectionReport report;
  report.tolerance = opt.tolerance;
  for (std::size_t ia = 0; ia < pas.size(); ++ia) {
    for (std::size_t ib = 0; ib < pbs.size(); ++ib) {
      const Patch& pa = pas[ia];
      const Patch& pb = pbs[ib];
      for (int start = 0; start < opt.starts; ++start) {
        Engine rng = make_engine(opt.seed, static_cast<std::uint64_t>(start), 0x1257 + 16 * ia + ib);
        const auto root = joint_newton(pa, pb, pa.sample(rng), pb.sample(rng), opt.max_iterations);
        if (!root.converged || !pa.contains(root.qa, 1e-9) || !pb.contains(root.qb, 1e-9)) continue;
        const Vec x = pa.eval(root.qa);
        const bool seen = std::any_of(report.points.begin(), report.points.end(),
                                      [&](const Vec& p) { return (p - x).norm() < opt.dedupe_radius; });
        if (seen) continue;
        report.points.push_back(x);
        report.residuals.push_back(root.residual);
        report.margins.push_back(transversality_margin(pa.tangents(root.qa), pb.tangents(root.qb)));
        report.patch_a.push_back(static_cast<int>(ia));
        report.patch_b.push_back(static_cast<int>(ib));
        if (boundary) boundary->push_back(std::min(pa.boundary_margin(root.qa), pb.boundary_margin(root.qb)));
      }
    }
  }
  report.certified = std::all_of(report.margins.begin(), report.margins.end(),
                                 [&](double m) { return m >= opt.tolerance; });
  return report;
}

}  // namespace detail

/// Intersection points of A and B (dim A + dim B = n) with per-point
/// transversality margins. The certificate is withheld if any root is tangent.
template <class ShapeA, class ShapeB>
IntersectionReport transversal_intersections(const ShapeA& a, const ShapeB& b, const IntersectionOptions& opt = {}) {
  const std::vector<Patch> pas = patches_of(a);
  const std::vector<Patch> pbs = patches_of(b);
  require(!pas.empty() && !pbs.empty(), ErrorKind::domain, "transversal_intersections: empty shape");
  const int n = pas.front().ambient_dim();
  require(pbs.front().ambient_dim() == n, ErrorKind::domain, "transversal_intersections: ambient dimensions differ");
  require(pas.front().dim() + pbs.front().dim() == n, ErrorKind::domain,
          "transversal_intersections: need dim A + dim B = n");
  return detail::patch_intersections(pas, pbs, opt);
}

template <class ShapeA, class ShapeB>
IntersectionReport transversal_intersections(const ShapeA& a, const ShapeB& b, double tolerance) {
  IntersectionOptions opt;
  opt.tolerance = tolerance;
  return transversal_intersections(a, b, opt);
}

struct SplitCertificate {
  int ball = 0;    // index m of the ball B_m (1-based)
  int sphere = 0;  // index of the component tested against it (1-based)
  DistanceResult distance;
  bool granted = false;
};

/// Split certificate for the sublink {K_m, K_m'}: B1 against K2, B2 against
/// K3, B3 against K1, whichever matches the unordered pair.
inline SplitCertificate split_certificate(const Link& link, int m, int m2, int budget = 64, std::uint64_t seed = 0) {
  require(m >= 1 && m <= 3 && m2 >= 1 && m2 <= 3 && m != m2, ErrorKind::domain,
          "split_certificate: need two distinct components in {1, 2, 3}");
  const int lo = std::min(m, m2);
  const int hi = std::max(m, m2);
  SplitCertificate cert;
  if (lo == 1 && hi == 2) {
    cert.ball = 1;
    cert.sphere = 2;
  } else if (lo == 2 && hi == 3) {
    cert.ball = 2;
    cert.sphere = 3;
  } else {
    cert.ball = 3;
    cert.sphere = 1;
  }
  const auto balls = bounding_balls(link);
  cert.distance = min_distance(balls[static_cast<std::size_t>(cert.ball - 1)],
                               link.components[static_cast<std::size_t>(cert.sphere - 1)], budget, seed);
  cert.granted = cert.distance.distance > 1e-6;
  return cert;
}

struct SeparationResult {
  int parity = 0;
  int crossings = 0;
  int attempts = 0;
  Vec direction;  // unit vector m such that the arc is cos(t) q+ + sin(t) R m
  std::vector<double> margins;
};

struct SeparationOptions {
  int starts = 128;
  std::uint64_t seed = 0;
  int max_attempts = 16;
  double margin = 1e-6;
  double containment = 1e-8;
  int containment_samples = 512;
};

/// The great half-circle of `sigma` from q to -q through R m.
inline Patch great_arc(const EmbeddedSphere& sigma, const Vec& q_plus, const Vec& m) {
  const double radius = (q_plus - sigma.center).norm();
  Mat frame(q_plus.size(), 2);
  frame.col(0) = (q_plus - sigma.center) / radius;
  frame.col(1) = m;
  return {Domain::hemisphere, sigma.center, frame, Vec::Constant(2, radius), 1, std::nullopt, 0.0};
}

/// Parity of the crossings of a great arc from q+ to q- in Sigma with a
/// codimension-one surface of Sigma; 1 means the surface separates q+ from q-.
template <class Surface>
SeparationResult separation_parity(const Surface& surface, const Vec& q_plus, const Vec& q_minus,
                                   const EmbeddedSphere& sigma, const SeparationOptions& opt = {}) {
  const std::vector<Patch> sps = patches_of(surface);
  require(!sps.empty(), ErrorKind::domain, "separation_parity: empty surface");
  const int dim = sigma.ambient_dim();
  require(sps.front().ambient_dim() == dim && q_plus.size() == dim && q_minus.size() == dim, ErrorKind::domain,
          "separation_parity: ambient dimensions differ");
  require(sps.front().dim() + 1 == sigma.sphere_dim(), ErrorKind::domain,
          "separation_parity: surface must have codimension one in sigma");
  require(implicit_residual(sigma, q_plus) < opt.containment && implicit_residual(sigma, q_minus) < opt.containment,
          ErrorKind::domain, "separation_parity: q+ and q- must lie on sigma");
  require(((q_plus - sigma.center) + (q_minus - sigma.center)).norm() < opt.containment, ErrorKind::domain,
          "separation_parity: q+ and q- must be antipodal");
  for (std::size_t ip = 0; ip < sps.size(); ++ip) {
    Engine rng = make_engine(opt.seed, ip, 0x5e9a);
    for (int s = 0; s < opt.containment_samples; ++s) {
      const Vec x = sps[ip].eval(sps[ip].sample(rng));
      require(implicit_residual(sigma, x) < opt.containment, ErrorKind::domain,
              "separation_parity: surface does not lie in sigma");
    }
  }

  const Vec axis = (q_plus - sigma.center).normalized();
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Engine rng = make_engine(opt.seed, static_cast<std::uint64_t>(attempt), 0xa2c);
    Vec m = sigma.frame * uniform_on_sphere(rng, sigma.sphere_dim() + 1);
    m -= m.dot(axis) * axis;
    if (m.norm() < 1e-6) continue;
    m.normalize();

    IntersectionOptions iopt;
    iopt.starts = opt.starts;
    iopt.seed = opt.seed + static_cast<std::uint64_t>(attempt);
    iopt.tolerance = opt.margin;
    std::vector<double> boundary;
    const IntersectionReport hits = detail::patch_intersections({great_arc(sigma, q_plus, m)}, sps, iopt, &boundary);
    for (std::size_t k = 0; k < hits.size(); ++k) {
      // An arc endpoint on the surface means q+ or q- lies on it.
      const Vec& x = hits.points[k];
      require((x - q_plus).norm() > 1e-7 && (x - q_minus).norm() > 1e-7, ErrorKind::domain,
              "separation_parity: q+ or q- lies on the surface");
    }
    if (!hits.certified) continue;
    SeparationResult out;
    out.crossings = static_cast<int>(hits.size());
    out.parity = out.crossings % 2;
    out.attempts = attempt + 1;
    out.direction = m;
    out.margins = hits.margins;
    return out;
  }
  throw Error(ErrorKind::inconclusive, "separation_parity: arc stays tangent to the surface after all perturbations");
}

}  // namespace linklab
