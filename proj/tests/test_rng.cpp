#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "semcom/rng.hpp"

using semcom::Rng;

TEST(Rng, SameSeedSameStream) {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DerivedStreamsDifferByTagAndIndex) {
  std::set<std::uint64_t> firsts;
  for (const char* tag : {"expert", "general", "scene"})
    for (std::uint64_t i = 0; i < 50; ++i) firsts.insert(Rng::derive(9, tag, i).next_u64());
  EXPECT_EQ(firsts.size(), 150u);
  EXPECT_EQ(Rng::derive(9, "scene", 3).next_u64(), Rng::derive(9, "scene", 3).next_u64());
  EXPECT_EQ(Rng(Rng::derive_seed(9, "x", 1, 2, 3)).next_u64(), Rng::derive(9, "x", 1, 2, 3).next_u64());
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 4 * std::sqrt(1.0 / 12 / 100000));
}

TEST(Rng, BelowStaysInRange) {
  Rng r(2);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[r.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 5 * std::sqrt(10000.0));
}

TEST(Rng, NormalMoments) {
  Rng r(3);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(Rng, ComplexNormalVariance) {
  Rng r(4);
  const int n = 200000;
  double power = 0.0;
  for (int i = 0; i < n; ++i) power += std::norm(r.complex_normal(0.3));
  EXPECT_NEAR(power / n, 0.3, 0.005);
}

TEST(Rng, BetaMean) {
  Rng r(5);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.beta(2.0, 6.0);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    sum += x;
  }
  EXPECT_NEAR(sum / n, 0.25, 0.003);
}

TEST(Rng, GammaSmallShapeMean) {
  Rng r(6);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += r.gamma(0.5);
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Rng, PoissonMean) {
  Rng r(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += static_cast<double>(r.poisson(3.2));
  EXPECT_NEAR(sum / 100000, 3.2, 0.03);
}

TEST(Rng, Fnv1aKnownValue) {
  EXPECT_EQ(semcom::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(semcom::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}
