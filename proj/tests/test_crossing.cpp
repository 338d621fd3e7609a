#include "linklab/catalog.hpp"
#include "linklab/crossing.hpp"
#include "linklab/linking.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace linklab;

namespace {

Word reduced_word(const Loop& loop, const MembraneSystem& sys) { return reduce_word(crossing_word(loop, sys).word); }

bool check_passed(const MembraneValidity& v, const std::string& name) {
  for (const auto& c : v.checks) {
    if (c.name == name) return c.passed;
  }
  ADD_FAILURE() << "no check named " << name;
  return false;
}

}  // namespace

TEST(MembraneValidity, DefaultSystemIsValid) {
  for (int n = 3; n <= 5; ++n) {
    const Link link = build_family(1, 0, n);
    for (double f : {0.1, 0.2, 0.5}) {
      const auto v = validate_membrane_system(default_membrane_system(link, f), link);
      EXPECT_TRUE(v.valid) << "n " << n << " fraction " << f;
      EXPECT_EQ(v.checks.size(), 5u);
    }
  }
}

TEST(MembraneValidity, FlatBallsAreRejected) {
  const Link link = build_family(1, 0, 3);
  const auto balls = bounding_balls(link);
  const auto v = validate_membrane_system({flat_membrane(balls[0]), flat_membrane(balls[1])}, link);
  EXPECT_FALSE(v.valid);
  EXPECT_FALSE(check_passed(v, "b_avoids_K1"));
  EXPECT_TRUE(check_passed(v, "a_avoids_K2"));
}

TEST(MembraneValidity, TranslatedMembraneIsRejected) {
  const Link link = build_family(1, 0, 3);
  MembraneSystem sys = default_membrane_system(link);
  sys.a.base.center(2) += 0.5;
  const auto v = validate_membrane_system(sys, link);
  EXPECT_FALSE(v.valid);
  EXPECT_FALSE(check_passed(v, "a_meets_K1_only_at_rim"));
}

TEST(MembraneValidity, RejectsOtherFamilies) {
  const Link link = build_family(2, 0, 4);
  const auto balls = bounding_balls(link);
  EXPECT_THROW(validate_membrane_system({flat_membrane(balls[0]), flat_membrane(balls[1])}, link), Error);
}

TEST(CrossingWord, K3IsCommutator) {
  for (int n = 3; n <= 5; ++n) {
    const Link link = build_family(1, 0, n);
    const Word w = reduced_word(loop_of(link.K3()), default_membrane_system(link));
    EXPECT_EQ(w.size(), 4u) << w.str();
    EXPECT_TRUE(commutator_class_check(w).is_commutator) << w.str();
    EXPECT_EQ(w.exponent_sum('a'), 0);
    EXPECT_EQ(w.exponent_sum('b'), 0);
  }
}

TEST(CrossingWord, GeneratorLoopsAreSingleLetters) {
  for (int n = 3; n <= 5; ++n) {
    const Link link = build_family(1, 0, n);
    const MembraneSystem sys = default_membrane_system(link);
    const auto loops = generator_loops(n);
    const Word a = reduced_word(loop_of(loops.alpha), sys);
    const Word b = reduced_word(loop_of(loops.beta), sys);
    ASSERT_EQ(a.size(), 1u) << a.str();
    ASSERT_EQ(b.size(), 1u) << b.str();
    EXPECT_EQ(a.letters[0].generator, 'b');
    EXPECT_EQ(b.letters[0].generator, 'a');
  }
}

TEST(CrossingWord, FarLoopIsEmpty) {
  const Link link = build_family(1, 0, 3);
  Mat frame = axis_frame(3, std::vector<int>{0, 1});
  const EmbeddedSphere far = make_sphere(30.0 * unit_vector(3, 2), frame, Vec::Ones(2));
  const auto r = crossing_word(loop_of(far), default_membrane_system(link));
  EXPECT_TRUE(r.word.empty());
  EXPECT_EQ(r.attempts, 1);
}

TEST(CrossingWord, RotatedStartIsCyclicConjugate) {
  const Link link = build_family(1, 0, 4);
  const MembraneSystem sys = default_membrane_system(link);
  const Loop k3 = loop_of(link.K3());
  const Word base = cyclically_reduce(crossing_word(k3, sys).word);
  for (double shift : {0.1, 0.37, 0.5, 0.81}) {
    const Word w = cyclically_reduce(crossing_word(rotated(k3, shift), sys).word);
    EXPECT_TRUE(cyclically_equal(w, base)) << w.str() << " vs " << base.str();
  }
}

TEST(CrossingWord, ReversedLoopGivesInverse) {
  const Link link = build_family(1, 0, 3);
  const MembraneSystem sys = default_membrane_system(link);
  const Loop k3 = loop_of(link.K3());
  const Word forward = cyclically_reduce(crossing_word(k3, sys).word);
  const Word backward = cyclically_reduce(crossing_word(reversed(k3), sys).word);
  EXPECT_TRUE(cyclically_equal(backward, inverse(forward)));
}

TEST(CrossingWord, StableUnderBumpHeight) {
  const Link link = build_family(1, 0, 3);
  const Loop k3 = loop_of(link.K3());
  const std::string first = reduced_word(k3, default_membrane_system(link, 0.1)).str();
  for (double f : {0.2, 0.35, 0.5, 0.8}) {
    EXPECT_EQ(reduced_word(k3, default_membrane_system(link, f)).str(), first) << f;
  }
}

TEST(CrossingWord, ExponentSumsMatchLinkingNumbers) {
  // Random circles in the complement of K1 u K2: the exponent sum of a
  // generator must equal the linking number with its boundary component.
  const Link link = build_family(1, 0, 3);
  const MembraneSystem sys = default_membrane_system(link);
  const Vec v = Vec::Ones(3).normalized();
  Engine rng = make_engine(2024, 0);
  int tested = 0;
  int linked = 0;
  while (tested < 20) {
    Vec center(3);
    for (int k = 0; k < 3; ++k) center(k) = 6.0 * uniform01(rng) - 3.0;
    Mat frame(3, 2);
    frame.col(0) = uniform_on_sphere(rng, 3);
    Vec second = uniform_on_sphere(rng, 3);
    second -= second.dot(frame.col(0)) * frame.col(0);
    frame.col(1) = second.normalized();
    const double radius = 0.5 + 2.5 * uniform01(rng);
    const EmbeddedSphere circle = make_sphere(center, frame, Vec::Constant(2, radius));
    if (min_distance(circle, link.K1()).distance < 0.05 || min_distance(circle, link.K2()).distance < 0.05) continue;
    const Word w = crossing_word(loop_of(circle), sys).word;
    const long lk1 = linking_number_preimage(circle, link.K1(), v);
    const long lk2 = linking_number_preimage(circle, link.K2(), v);
    EXPECT_EQ(w.exponent_sum('a'), lk1) << "circle " << tested << " word " << w.str();
    EXPECT_EQ(w.exponent_sum('b'), lk2) << "circle " << tested << " word " << w.str();
    if (lk1 != 0 || lk2 != 0) ++linked;
    ++tested;
  }
  EXPECT_GT(linked, 0);
}

TEST(CrossingWord, UnlinkControlGivesEmptyWord) {
  const Link link = unlink_control(1, 3);
  const auto r = crossing_word(loop_of(link.K3()), membrane_system_for(link, 0.2));
  EXPECT_TRUE(r.word.empty());
}

TEST(CrossingWord, RejectsNonCircles) {
  const Link link = build_family(1, 0, 4);
  EXPECT_THROW(loop_of(link.K1()), Error);
}
