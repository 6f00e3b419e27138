#include <gtest/gtest.h>

#include <cmath>

#include "shapelearn/metrics.hpp"
#include "shapelearn/random.hpp"

using namespace shapelearn;

namespace {

Descriptor geometric(std::vector<double> v) {
  Descriptor d;
  d.kind = DescriptorKind::geometric;
  d.values = std::move(v);
  d.config_hash = 42;
  return d;
}

Descriptor visual(std::vector<double> v, int rings, int wedges) {
  Descriptor d;
  d.kind = DescriptorKind::visual;
  d.values = std::move(v);
  d.config_hash = 77;
  d.rings = rings;
  d.wedges = wedges;
  return d;
}

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2, 2);
  return v;
}

}  // namespace

TEST(Euclidean, Examples) {
  auto a = geometric({0, 0, 0, 0});
  auto b = geometric({1, 1, 1, 1});
  EXPECT_EQ(euclidean_distance(a, a), 0.0);
  EXPECT_EQ(euclidean_distance(a, b), 2.0);
}

TEST(Euclidean, MatchesDirectSummation) {
  Rng rng(1);
  auto a = geometric(random_vector(rng, 64));
  auto b = geometric(random_vector(rng, 64));
  long double acc = 0;
  for (std::size_t i = 0; i < 64; ++i) {
    const long double diff = static_cast<long double>(a.values[i]) - b.values[i];
    acc += diff * diff;
  }
  EXPECT_NEAR(euclidean_distance(a, b), static_cast<double>(std::sqrt(acc)), 1e-12);
}

TEST(Euclidean, IncomparableConfigs) {
  auto a = geometric({1, 2, 3});
  auto b = geometric({1, 2, 3});
  b.config_hash = 43;
  try {
    euclidean_distance(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::incomparable_descriptors);
  }
}

TEST(Correlation, Examples) {
  auto a = geometric({1, 3, 2, 5, 4});
  EXPECT_NEAR(correlation_distance(a, a), 0.0, 1e-15);

  std::vector<double> anti, affine;
  for (double x : a.values) {
    anti.push_back(-x + 10);
    affine.push_back(3 * x + 5);
  }
  EXPECT_NEAR(correlation_distance(a, geometric(anti)), 2.0, 1e-12);
  EXPECT_NEAR(correlation_distance(a, geometric(affine)), 0.0, 1e-12);
}

TEST(Correlation, ZeroVarianceIsAnError) {
  auto a = geometric({1, 2, 3, 4});
  auto c = geometric({2, 2, 2, 2});
  try {
    correlation_distance(a, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_variance);
  }
  EXPECT_THROW(aligned_distance(c, a, {Metric::correlation, Alignment::circular_shift}), Error);
}

TEST(Aligned, FindsShift) {
  Rng rng(2);
  auto a = geometric(random_vector(rng, 64));
  std::vector<double> shifted(64);
  for (std::size_t i = 0; i < 64; ++i) shifted[(i + 7) % 64] = a.values[i];
  auto b = geometric(shifted);
  for (Metric m : {Metric::euclidean, Metric::correlation}) {
    const auto r = aligned_distance(a, b, {m, Alignment::circular_shift});
    EXPECT_NEAR(r.distance, 0.0, 1e-12);
    EXPECT_EQ(r.shift, 7);
  }
}

TEST(Aligned, NoneEqualsPlainMetric) {
  Rng rng(3);
  auto a = geometric(random_vector(rng, 16));
  auto b = geometric(random_vector(rng, 16));
  for (Metric m : {Metric::euclidean, Metric::correlation}) {
    const auto r = aligned_distance(a, b, {m, Alignment::none});
    EXPECT_EQ(r.distance, distance(a, b, m));
    EXPECT_EQ(r.shift, 0);
  }
}

TEST(Aligned, MatchesExhaustiveShiftOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = geometric(random_vector(rng, 32));
    auto b = geometric(random_vector(rng, 32));
    double best = 1e300;
    int best_shift = -1;
    for (int s = 0; s < 32; ++s) {
      std::vector<double> rot(32);
      for (std::size_t i = 0; i < 32; ++i) rot[i] = b.values[(i + static_cast<std::size_t>(s)) % 32];
      const double d = euclidean_distance(a, geometric(rot));
      if (d < best) {
        best = d;
        best_shift = s;
      }
    }
    const auto r = aligned_distance(a, b, {Metric::euclidean, Alignment::circular_shift});
    EXPECT_NEAR(r.distance, best, 1e-12);
    EXPECT_EQ(r.shift, best_shift);
  }
}

TEST(Aligned, VisualShiftsWedgesWithinRings) {
  // 2 rings x 4 wedges; b rotates every ring by one wedge.
  auto a = visual({1, 2, 3, 4, 5, 6, 7, 8}, 2, 4);
  auto b = visual({4, 1, 2, 3, 8, 5, 6, 7}, 2, 4);
  const auto r = aligned_distance(a, b, {Metric::euclidean, Alignment::circular_shift});
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.shift, 1);
  // A whole-vector rotation would not line these up.
  auto c = visual({8, 1, 2, 3, 4, 5, 6, 7}, 2, 4);
  EXPECT_GT(aligned_distance(a, c, {Metric::euclidean, Alignment::circular_shift}).distance, 0.0);
}

TEST(Aligned, TiesPickSmallestShift) {
  auto a = geometric({1, 0, 1, 0, 1, 0, 1, 0});
  const auto r = aligned_distance(a, a, {Metric::euclidean, Alignment::circular_shift});
  EXPECT_EQ(r.shift, 0);
  auto b = geometric({0, 1, 0, 1, 0, 1, 0, 1});
  EXPECT_EQ(aligned_distance(a, b, {Metric::euclidean, Alignment::circular_shift}).shift, 1);
}

TEST(MetricProperties, RandomPairs) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(8 + rng.below(60));
    auto a = geometric(random_vector(rng, n));
    auto b = geometric(random_vector(rng, n));
    for (Metric m : {Metric::euclidean, Metric::correlation}) {
      const MetricConfig aligned{m, Alignment::circular_shift};
      EXPECT_NEAR(distance(a, b, m), distance(b, a, m), 1e-12);
      EXPECT_NEAR(distance(a, a, m), 0.0, 1e-12);
      EXPECT_NEAR(aligned_distance(a, b, aligned).distance, aligned_distance(b, a, aligned).distance,
                  1e-12);
      EXPECT_LE(aligned_distance(a, b, aligned).distance, distance(a, b, m));
    }
    const double c = correlation_distance(a, b);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 2.0);
  }
}

TEST(Similarity, Examples) {
  EXPECT_EQ(similarity(0.0), 1.0);
  EXPECT_EQ(similarity(1.0), 0.5);
  EXPECT_EQ(similarity(3.0), 0.25);
  EXPECT_THROW(similarity(-0.1), Error);
  EXPECT_THROW(similarity(std::nan("")), Error);
}

TEST(Similarity, ArgmaxInvariantUnderScaling) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> d(10);
    for (auto& x : d) x = rng.uniform(0, 5);
    const double k = rng.uniform(0.1, 10);
    std::size_t best = 0, best_scaled = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (similarity(d[i]) > similarity(d[best])) best = i;
      if (similarity(k * d[i]) > similarity(k * d[best_scaled])) best_scaled = i;
    }
    EXPECT_EQ(best, best_scaled);
  }
}
