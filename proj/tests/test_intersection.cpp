#include "linklab/catalog.hpp"
#include "linklab/intersection.hpp"
#include "linklab/linking.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace linklab;

TEST(TransversalIntersections, CappedK3MeetsB2AtOrigin) {
  for (int n = 3; n <= 6; ++n) {
    for (int i = 1; i <= n - 2; ++i) {
      const Link link = build_family(i, 0, n);
      const auto rep = transversal_intersections(cap_upper_half(link).capped, bounding_balls(link)[1], 0.1);
      ASSERT_EQ(rep.size(), 1u) << "L(" << i << "," << n << ")";
      EXPECT_LT(rep.points[0].norm(), 1e-8);
      EXPECT_LT(rep.residuals[0], 1e-8);
      EXPECT_GT(rep.margins[0], 0.1);
      EXPECT_TRUE(rep.certified);
      EXPECT_EQ(rep.patch_a[0], 1);  // on the flat cap
    }
  }
}

TEST(TransversalIntersections, K2MeetsHalfBallAtTop) {
  for (int n = 3; n <= 6; ++n) {
    for (int i = 1; i <= n - 2; ++i) {
      const Link link = build_family(i, 0, n);
      const auto rep = transversal_intersections(link.K2(), cap_upper_half(link).region, 0.1);
      ASSERT_EQ(rep.size(), 1u) << "L(" << i << "," << n << ")";
      EXPECT_LT((rep.points[0] - 3.0 * unit_vector(n, n - 1)).norm(), 1e-8);
      EXPECT_LT(rep.residuals[0], 1e-8);
      EXPECT_GT(rep.margins[0], 0.1);
      EXPECT_TRUE(rep.certified);
    }
  }
}

TEST(TransversalIntersections, NearRoundTop) {
  const Link link = build_family(1, 0, 3, near_round_coefficients(0.01));
  const auto rep = transversal_intersections(link.K2(), cap_upper_half(link).region, 0.1);
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_LT((rep.points[0] - link.coeffs.c2 * unit_vector(3, 2)).norm(), 1e-8);
}

TEST(TransversalIntersections, K2MissesB1) {
  const Link link = build_family(1, 0, 3);
  const auto rep = transversal_intersections(link.K2(), bounding_balls(link)[0]);
  EXPECT_EQ(rep.size(), 0u);
  EXPECT_TRUE(rep.certified);
}

TEST(TransversalIntersections, CountMatchesPreimageRoots) {
  // K3' meets B2 once, so |lk(K3', K2)| must be one as well.
  for (int n = 3; n <= 5; ++n) {
    const Link link = build_family(1, 0, n);
    const auto cap = cap_upper_half(link).capped;
    const auto rep = transversal_intersections(cap, bounding_balls(link)[1], 0.1);
    const auto pre = preimage_degree(cap, link.K2(), Vec::Ones(n).normalized());
    EXPECT_EQ(static_cast<long>(rep.size()), std::abs(pre.degree));
  }
}

TEST(TransversalIntersections, TangentCircleIsNotCertified) {
  // The line x2 = 1 in the plane touches the unit circle at (0, 1).
  const EmbeddedSphere circle = make_sphere(Vec::Zero(2), axis_frame(2, std::vector<int>{0, 1}), Vec::Ones(2));
  Vec center(2);
  center << 0.0, 1.0;
  const FlatBall line = make_ball(center, axis_frame(2, std::vector<int>{0}), Vec::Constant(1, 2.0));
  const auto rep = transversal_intersections(circle, line, 1e-3);
  EXPECT_FALSE(rep.certified);
}

TEST(TransversalIntersections, RejectsWrongDimensions) {
  const Link link = build_family(1, 0, 3);
  EXPECT_THROW(transversal_intersections(link.K1(), link.K2()), Error);
}

TEST(SplitCertificates, AllPairsGranted) {
  for (int n = 3; n <= 6; ++n) {
    for (int j = 0; j <= n - 3; ++j) {
      for (int i = 1; i <= n - 2 - j; ++i) {
        const Link link = build_family(i, j, n);
        for (const auto& p : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
          const auto cert = split_certificate(link, p.first, p.second);
          EXPECT_TRUE(cert.granted) << "L(" << i << "," << j << "," << n << ") " << p.first << p.second;
          EXPECT_GT(cert.distance.distance, 0.3);
        }
      }
    }
  }
}

TEST(SplitCertificates, BallAssignment) {
  const Link link = build_family(1, 0, 3);
  const auto c12 = split_certificate(link, 2, 1);
  EXPECT_EQ(c12.ball, 1);
  EXPECT_EQ(c12.sphere, 2);
  EXPECT_NEAR(c12.distance.distance, 1.0, 1e-6);
  const auto c23 = split_certificate(link, 2, 3);
  EXPECT_EQ(c23.ball, 2);
  EXPECT_EQ(c23.sphere, 3);
  const auto c13 = split_certificate(link, 1, 3);
  EXPECT_EQ(c13.ball, 3);
  EXPECT_EQ(c13.sphere, 1);
  EXPECT_NEAR(c13.distance.distance, 1.0, 1e-6);
  EXPECT_THROW(split_certificate(link, 1, 1), Error);
  EXPECT_THROW(split_certificate(link, 0, 2), Error);
}

TEST(SplitCertificates, NearRoundB1ToK2) {
  for (double eps : {0.3, 0.1, 0.01}) {
    const Link link = build_family(1, 0, 4, near_round_coefficients(eps));
    const auto cert = split_certificate(link, 1, 2);
    EXPECT_TRUE(cert.granted);
    EXPECT_NEAR(cert.distance.distance, link.coeffs.c2 - link.coeffs.c1, 1e-6);
  }
}

TEST(SeparationParity, GreatSphereSeparates) {
  for (int n = 3; n <= 6; ++n) {
    for (int i = 1; i <= n - 2; ++i) {
      const GreatSpheres gs = great_spheres(i, n);
      const auto r = separation_parity(gs.g3, gs.q_plus, gs.q_minus, gs.sigma);
      EXPECT_EQ(r.parity, 1);
      EXPECT_EQ(r.crossings, 1);
    }
  }
}

TEST(SeparationParity, LiftedCapSeparates) {
  for (int n = 3; n <= 6; ++n) {
    for (int i = 1; i <= n - 2; ++i) {
      const Link link = build_family(i, 0, n);
      const GreatSpheres gs = great_spheres(i, n, link.coeffs.c2);
      const auto surface = lifted(patches_of(cap_upper_half(link).capped), link.coeffs.c2);
      EXPECT_EQ(separation_parity(surface, gs.q_plus, gs.q_minus, gs.sigma).parity, 1) << "L(" << i << "," << n << ")";
    }
  }
}

TEST(SeparationParity, SmallSphereDoesNotSeparate) {
  // A small circle around a point of the equator of Sigma = S^2 bounds a cap
  // containing neither pole.
  const GreatSpheres gs = great_spheres(1, 3);
  const double r = 3.0;
  const double t = 0.3;
  Vec center = std::cos(t) * r * unit_vector(4, 0);
  Mat frame(4, 2);
  frame.col(0) = unit_vector(4, 2);
  frame.col(1) = unit_vector(4, 3);
  const EmbeddedSphere small = make_sphere(center, frame, Vec::Constant(2, std::sin(t) * r));
  const auto res = separation_parity(small, gs.q_plus, gs.q_minus, gs.sigma);
  EXPECT_EQ(res.parity, 0);
}

TEST(SeparationParity, RejectsBadInput) {
  const GreatSpheres gs = great_spheres(1, 3);
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::inconclusive;
  };
  // G2 does not lie in Sigma.
  EXPECT_EQ(kind([&] { separation_parity(gs.g2, gs.q_plus, gs.q_minus, gs.sigma); }), ErrorKind::domain);
  // Not antipodal.
  EXPECT_EQ(kind([&] { separation_parity(gs.g3, gs.q_plus, gs.q_plus, gs.sigma); }), ErrorKind::domain);
  // Surface of the wrong dimension.
  EXPECT_EQ(kind([&] { separation_parity(gs.sigma, gs.q_plus, gs.q_minus, gs.sigma); }), ErrorKind::domain);
}
