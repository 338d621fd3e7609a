#pragma once

// Generalized Gauss linking number of two disjoint closed oriented
// submanifolds A^p, B^q of R^n with p + q = n - 1: the degree of
//     G(x, y) = (x - y) / |x - y|  :  A x B -> S^(n-1).
//
// Two independent routes:
//   linking_number_mc        integral of G^* dvol / Vol(S^(n-1))
//   linking_number_preimage  signed count of G^-1(v) for a regular value v
//
// In parameter coordinates with oriented tangent frames X (of A) and Y (of B)
// the pulled-back density is (-1)^q det[x - y | X | Y] / |x - y|^n.

#include "linklab/distance.hpp"
#include "linklab/parallel.hpp"
#include "linklab/patch.hpp"
#include "linklab/random.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace linklab {

struct LinkingEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long rounded = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  int workers = 0;  // 0: worker_count()
  int block_size = 8192;
  int distance_budget = 64;
  // Concentrate samples near the closest approach of A and B (unbiased
  // importance sampling, mixed half-and-half with the uniform law).
  bool importance = true;
};

namespace detail {

inline double gauss_density(const Vec& d, const Mat& ta, const Mat& tb, double sign, double sphere_vol) {
  const int n = static_cast<int>(d.size());
  Mat m(n, n);
  m.col(0) = d;
  m.middleCols(1, ta.cols()) = ta;
  m.rightCols(tb.cols()) = tb;
  const double r = d.norm();
  const double parity = (tb.cols() % 2 == 0) ? 1.0 : -1.0;
  return sign * parity * m.determinant() / (std::pow(r, n) * sphere_vol);
}

template <class ShapeA>
void check_complementary(const std::vector<Patch>& pas, const EmbeddedSphere& b, const char* who) {
  const std::string name(who);
  require(!pas.empty(), ErrorKind::domain, name + ": empty shape");
  const int n = b.ambient_dim();
  const int p = pas.front().dim();
  for (const auto& pa : pas) {
    require(pa.ambient_dim() == n, ErrorKind::domain, name + ": ambient dimensions differ");
    require(pa.dim() == p, ErrorKind::domain, name + ": patches of A have different dimensions");
  }
  require(p + b.sphere_dim() == n - 1, ErrorKind::domain, name + ": dimensions are not complementary (p + q != n - 1)");
}

inline double geometric_mean_radius(const Vec& radii) {
  return std::exp(radii.array().log().mean());
}

}  // namespace detail

/// Sampling law on the parameter domains of A: half uniform (w.r.t. the
/// parameter measure), half conformal concentrations around a few foci.
class ProposalA {
 public:
  struct Focus {
    int patch = 0;
    ConformalConcentration law;
  };

  ProposalA(const std::vector<Patch>& patches, std::vector<Focus> foci)
      : patches_(&patches), foci_(std::move(foci)) {
    for (const auto& p : patches) {
      total_ += p.measure();
      cumulative_.push_back(total_);
    }
  }

  double total_measure() const { return total_; }
  const std::vector<Focus>& foci() const { return foci_; }

  template <class Rng>
  std::pair<int, Vec> sample(Rng& rng) const {
    const auto& pas = *patches_;
    if (!foci_.empty() && uniform01(rng) < 0.5) {
      const auto& f = foci_[static_cast<std::size_t>(uniform01(rng) * foci_.size()) % foci_.size()];
      Vec u = f.law.sample(rng);
      if (pas[static_cast<std::size_t>(f.patch)].domain == Domain::hemisphere) {
        u(u.size() - 1) = std::abs(u(u.size() - 1));
      }
      return {f.patch, u};
    }
    const double pick = uniform01(rng) * total_;
    int patch = 0;
    while (patch + 1 < static_cast<int>(pas.size()) && pick > cumulative_[static_cast<std::size_t>(patch)]) ++patch;
    return {patch, pas[static_cast<std::size_t>(patch)].sample(rng)};
  }

  /// Density with respect to the parameter measure of the patch union.
  double density(int patch, const Vec& u) const {
    if (foci_.empty()) return 1.0 / total_;
    const Patch& pa = (*patches_)[static_cast<std::size_t>(patch)];
    double focused = 0.0;
    for (const auto& f : foci_) {
      if (f.patch != patch) continue;
      double g = f.law.density(u);
      if (pa.domain == Domain::hemisphere) {
        Vec mirrored = u;
        mirrored(mirrored.size() - 1) = -mirrored(mirrored.size() - 1);
        g += f.law.density(mirrored);
      }
      focused += g;
    }
    const double vol = sphere_volume(pa.param_size() - 1);
    return 0.5 / total_ + 0.5 * focused / (vol * static_cast<double>(foci_.size()));
  }

 private:
  const std::vector<Patch>* patches_;
  std::vector<Focus> foci_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

/// Sampling law on the sphere B given a point x: half uniform, half a
/// conformal concentration around the radial projection of x onto B.
class ProposalB {
 public:
  ProposalB(const EmbeddedSphere& b, bool concentrate)
      : b_(&b), concentrate_(concentrate && b.sphere_dim() >= 1), volume_(sphere_volume(b.sphere_dim())),
        radius_(detail::geometric_mean_radius(b.radii)) {}

  struct Draw {
    Vec w;
    double density = 0.0;  // w.r.t. the parameter measure of S^q
  };

  template <class Rng>
  Draw sample(const Vec& x, Rng& rng) const {
    const int m = b_->sphere_dim() + 1;
    if (const auto law = law_for(x)) {
      Draw d;
      d.w = uniform01(rng) < 0.5 ? uniform_on_sphere(rng, m) : law->sample(rng);
      d.density = (0.5 + 0.5 * law->density(d.w)) / volume_;
      return d;
    }
    return {uniform_on_sphere(rng, m), 1.0 / volume_};
  }

  double density(const Vec& x, const Vec& w) const {
    if (const auto law = law_for(x)) return (0.5 + 0.5 * law->density(w)) / volume_;
    return 1.0 / volume_;
  }

 private:
  std::optional<ConformalConcentration> law_for(const Vec& x) const {
    if (!concentrate_) return std::nullopt;
    const EmbeddedSphere& b = *b_;
    const Vec coords = b.frame.transpose() * (x - b.center);
    const Vec radial = coords.cwiseQuotient(b.radii.cwiseProduct(b.radii));
    const double norm = radial.norm();
    if (norm <= 1e-12) return std::nullopt;
    const Vec mu = radial / norm;
    const double near = (x - (b.center + b.frame * b.radii.cwiseProduct(mu))).norm();
    const double scale = near / (2.0 * radius_);
    if (scale >= 1.0) return std::nullopt;
    return ConformalConcentration{mu, std::max(scale, 1e-4)};
  }

  const EmbeddedSphere* b_;
  bool concentrate_;
  double volume_;
  double radius_;
};

namespace detail {

/// Distinct near-closest local minima of |A - B| lying on spherical patches.
inline std::vector<ProposalA::Focus> closest_foci(const std::vector<Patch>& pas, const DistanceResult& gap) {
  std::vector<ProposalA::Focus> foci;
  const double cutoff = 2.0 * gap.distance + 1e-3;
  for (const auto& m : gap.minima) {
    if (m.distance > cutoff || foci.size() >= 8) continue;
    const Patch& pa = pas[static_cast<std::size_t>(m.patch_a)];
    if (!pa.spherical() || pa.param_size() < 2) continue;
    const double scale = m.distance / (2.0 * geometric_mean_radius(pa.radii));
    if (scale >= 1.0) continue;
    bool duplicate = false;
    for (const auto& f : foci) {
      if (f.patch == m.patch_a && (f.law.mu - m.param_a).norm() < 0.05) duplicate = true;
    }
    if (!duplicate) foci.push_back({m.patch_a, ConformalConcentration{m.param_a, std::max(scale, 1e-4)}});
  }
  return foci;
}

}  // namespace detail

/// Monte Carlo estimate of the linking number of A (sphere or capped sphere)
/// with the sphere B. Deterministic for a fixed seed and independent of the
/// worker count.
template <class ShapeA>
LinkingEstimate linking_number_mc(const ShapeA& a, const EmbeddedSphere& b, std::int64_t samples, std::uint64_t seed,
                                  const McOptions& opt = {}) {
  const std::vector<Patch> pas = patches_of(a);
  detail::check_complementary<ShapeA>(pas, b, "linking_number_mc");
  require(samples >= 2, ErrorKind::domain, "linking_number_mc: need at least two samples");

  DistanceOptions dopt;
  dopt.budget = opt.distance_budget;
  dopt.seed = seed;
  dopt.keep_minima = opt.importance;
  const DistanceResult gap = min_distance(pas, b, dopt);
  require(gap.distance > 1e-6, ErrorKind::domain, "linking_number_mc: A and B are not disjoint");

  const Patch pb = sphere_patch(b);
  const int n = b.ambient_dim();
  const double target_vol = sphere_volume(n - 1);
  const ProposalA proposal_a(pas, opt.importance ? detail::closest_foci(pas, gap) : std::vector<ProposalA::Focus>{});
  const ProposalB proposal_b(b, opt.importance);

  const int block_size = std::max(1, opt.block_size);
  const int blocks = static_cast<int>((samples + block_size - 1) / block_size);
  std::vector<double> sums(static_cast<std::size_t>(blocks), 0.0);
  std::vector<double> squares(static_cast<std::size_t>(blocks), 0.0);

  auto run_block = [&](int block) {
    Engine rng = make_engine(seed, static_cast<std::uint64_t>(block), 0x6a055);
    const std::int64_t first = static_cast<std::int64_t>(block) * block_size;
    const std::int64_t count = std::min<std::int64_t>(block_size, samples - first);
    double sum = 0.0;
    double square = 0.0;
    for (std::int64_t s = 0; s < count; ++s) {
      const auto [patch, u] = proposal_a.sample(rng);
      const Patch& pa = pas[static_cast<std::size_t>(patch)];
      const Vec x = pa.eval(u);
      const auto draw = proposal_b.sample(x, rng);
      const Vec y = pb.eval(draw.w);
      const double sign = pa.orientation_at(u) * pb.orientation_at(draw.w);
      const double f = detail::gauss_density(x - y, pa.tangents(u), pb.tangents(draw.w), sign, target_vol);
      const double value = f / (proposal_a.density(patch, u) * draw.density);
      sum += value;
      square += value * value;
    }
    sums[static_cast<std::size_t>(block)] = sum;
    squares[static_cast<std::size_t>(block)] = square;
  };

  for_each_block(blocks, opt.workers > 0 ? opt.workers : worker_count(), run_block);

  double sum = 0.0;
  double square = 0.0;
  for (int blk = 0; blk < blocks; ++blk) {
    sum += sums[static_cast<std::size_t>(blk)];
    square += squares[static_cast<std::size_t>(blk)];
  }
  const double m = static_cast<double>(samples);
  LinkingEstimate est;
  est.value = sum / m;
  const double variance = std::max(0.0, (square - m * est.value * est.value) / (m - 1.0));
  est.std_error = std::sqrt(variance / m);
  est.rounded = std::lround(est.value);
  est.samples = samples;
  est.seed = seed;
  return est;
}

struct PreimageRoot {
  int patch_a = 0;
  Vec param_a;
  Vec param_b;
  Vec point_a;
  Vec point_b;
  double lambda = 0.0;
  double regularity = 0.0;  // |det| with unit columns
  int sign = 0;
};

struct PreimageResult {
  long degree = 0;
  Vec value;  // the regular value actually used
  int retries = 0;
  std::vector<PreimageRoot> roots;
};

struct PreimageOptions {
  int starts = 256;
  std::uint64_t seed = 0;
  int max_iterations = 60;
  double dedupe_radius = 1e-6;
  double regularity = 1e-8;
  int max_retries = 8;
  int distance_budget = 64;
};

namespace detail {

struct NewtonOutcome {
  bool converged = false;
  Vec qa, qb;
  double lambda = 0.0;
};

inline NewtonOutcome preimage_newton(const Patch& pa, const Patch& pb, Vec qa, Vec qb, double lambda, const Vec& v,
                                     int max_iterations) {
  const int n = static_cast<int>(v.size());
  auto residual = [&](const Vec& a, const Vec& b, double lam) -> Vec { return pa.eval(a) - pb.eval(b) - lam * v; };
  Vec f = residual(qa, qb, lambda);
  double fn = f.norm();
  NewtonOutcome out;
  for (int it = 0; it < max_iterations; ++it) {
    const double scale = 1.0 + pa.eval(qa).norm() + pb.eval(qb).norm();
    if (fn < 1e-13 * scale) {
      out.converged = true;
      break;
    }
    const Mat ta = pa.tangents(qa);
    const Mat tb = pb.tangents(qb);
    Mat jac(n, n);
    jac.leftCols(ta.cols()) = ta;
    jac.middleCols(ta.cols(), tb.cols()) = -tb;
    jac.col(n - 1) = -v;
    Eigen::PartialPivLU<Mat> lu(jac);
    if (!(std::abs(lu.determinant()) > 1e-300)) break;
    const Vec delta = lu.solve(-f);
    if (!delta.allFinite()) break;
    double t = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Vec na = pa.retract(qa, t * delta.head(ta.cols()));
      const Vec nb = pb.retract(qb, t * delta.segment(ta.cols(), tb.cols()));
      const double nl = lambda + t * delta(n - 1);
      const Vec nf = residual(na, nb, nl);
      if (nf.norm() < (1.0 - 1e-4 * t) * fn) {
        qa = na;
        qb = nb;
        lambda = nl;
        f = nf;
        fn = nf.norm();
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      const double scale2 = 1.0 + pa.eval(qa).norm() + pb.eval(qb).norm();
      out.converged = fn < 1e-11 * scale2;
      break;
    }
  }
  if (!out.converged) {
    const double scale = 1.0 + pa.eval(qa).norm() + pb.eval(qb).norm();
    out.converged = fn < 1e-11 * scale;
  }
  out.qa = qa;
  out.qb = qb;
  out.lambda = lambda;
  return out;
}

}  // namespace detail

/// Signed count of solutions of x - y = lambda v, lambda > 0, x in A, y in B.
/// A singular or boundary root triggers a retry with a perturbed v.
template <class ShapeA>
PreimageResult preimage_degree(const ShapeA& a, const EmbeddedSphere& b, Vec v, const PreimageOptions& opt = {}) {
  const std::vector<Patch> pas = patches_of(a);
  detail::check_complementary<ShapeA>(pas, b, "linking_number_preimage");
  const int n = b.ambient_dim();
  require(v.size() == n && v.norm() > 0.0, ErrorKind::domain, "linking_number_preimage: bad direction");
  v /= v.norm();
  const DistanceResult gap = min_distance(pas, b, opt.distance_budget, opt.seed);
  require(gap.distance > 1e-6, ErrorKind::domain, "linking_number_preimage: A and B are not disjoint");

  const Patch pb = sphere_patch(b);
  const int q = b.sphere_dim();
  Engine perturb = make_engine(opt.seed, 0, 0x7e71);

  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    PreimageResult result;
    result.value = v;
    result.retries = attempt;
    bool regular = true;
    for (std::size_t ip = 0; ip < pas.size() && regular; ++ip) {
      const Patch& pa = pas[ip];
      for (int start = 0; start < opt.starts && regular; ++start) {
        Engine rng = make_engine(opt.seed, static_cast<std::uint64_t>(start), 0x93e0 + ip);
        const Vec qa0 = pa.sample(rng);
        const Vec qb0 = uniform_on_sphere(rng, q + 1);
        const double lam0 = std::max((pa.eval(qa0) - pb.eval(qb0)).norm(), 1e-3);
        const auto sol = detail::preimage_newton(pa, pb, qa0, qb0, lam0, v, opt.max_iterations);
        if (!sol.converged || sol.lambda <= 0.0 || !pa.contains(sol.qa, 1e-9)) continue;
        const Vec xa = pa.eval(sol.qa);
        const Vec xb = pb.eval(sol.qb);
        bool seen = false;
        for (const auto& r : result.roots) {
          if ((r.point_a - xa).norm() < opt.dedupe_radius && (r.point_b - xb).norm() < opt.dedupe_radius) seen = true;
        }
        if (seen) continue;
        if (pa.boundary_margin(sol.qa) < 1e-7) {
          regular = false;
          break;
        }
        const Mat ta = pa.tangents(sol.qa);
        const Mat tb = pb.tangents(sol.qb);
        Mat m(n, n);
        m.col(0) = v;
        m.middleCols(1, ta.cols()) = ta;
        m.rightCols(tb.cols()) = tb;
        const double det = m.determinant();
        const double reg = std::abs(normalized_columns(m).determinant());
        if (reg < opt.regularity) {
          regular = false;
          break;
        }
        PreimageRoot root;
        root.patch_a = static_cast<int>(ip);
        root.param_a = sol.qa;
        root.param_b = sol.qb;
        root.point_a = xa;
        root.point_b = xb;
        root.lambda = sol.lambda;
        root.regularity = reg;
        const double parity = (q % 2 == 0) ? 1.0 : -1.0;
        root.sign = (pa.orientation_at(sol.qa) * pb.orientation_at(sol.qb) * parity * det) > 0.0 ? 1 : -1;
        result.degree += root.sign;
        result.roots.push_back(std::move(root));
      }
    }
    if (regular) return result;
    Vec jitter(n);
    std::normal_distribution<double> normal;
    for (int k = 0; k < n; ++k) jitter(k) = normal(perturb);
    v = v + 1e-2 * jitter;
    v /= v.norm();
  }
  throw Error(ErrorKind::regular_value_failure, "linking_number_preimage: no regular value found after retries");
}

template <class ShapeA>
long linking_number_preimage(const ShapeA& a, const EmbeddedSphere& b, const Vec& v, int starts = 256,
                             std::uint64_t seed = 0) {
  PreimageOptions opt;
  opt.starts = starts;
  opt.seed = seed;
  return preimage_degree(a, b, v, opt).degree;
}

}  // namespace linklab
