#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shapelearn/descriptors.hpp"
#include "shapelearn/metrics.hpp"
#include "shapelearn/polygon_gen.hpp"

using namespace shapelearn;

namespace {

std::vector<Point2> as_vector(const Polygon& p) { return {p.vertices().begin(), p.vertices().end()}; }

Polygon transformed(const Polygon& p, double scale, double angle, Point2 shift) {
  std::vector<Point2> out;
  const double c = std::cos(angle), s = std::sin(angle);
  for (const auto& v : p.vertices()) {
    out.push_back(Point2{scale * (c * v.x - s * v.y), scale * (s * v.x + c * v.y)} + shift);
  }
  return Polygon::make(out);
}

// sqrt(6/5): circumradius of a regular hexagon whose boundary RMS radius is 1.
// Frozen from oracle::boundary_rms_numeric on the unit hexagon; see the test
// below that re-derives it.
constexpr double kHexagonNormalizedCircumradius = 1.0954451150103321;

}  // namespace

TEST(NormalizePose, CentersAndScalesSquare) {
  auto sq = Polygon::make({{10, 10}, {11, 10}, {11, 11}, {10, 11}});
  auto n = normalize_pose(sq);
  EXPECT_NEAR(centroid(n).x, 0.0, 1e-15);
  EXPECT_NEAR(centroid(n).y, 0.0, 1e-15);
  EXPECT_NEAR(oracle::boundary_rms_numeric(as_vector(n)), 1.0, 1e-8);
  // Half side sqrt(3)/2 after normalization.
  for (const auto& v : n.vertices()) {
    EXPECT_NEAR(std::abs(v.x), std::sqrt(3.0) / 2, 1e-15);
    EXPECT_NEAR(std::abs(v.y), std::sqrt(3.0) / 2, 1e-15);
  }
}

TEST(NormalizePose, HexagonCircumradiusMatchesNumericIntegration) {
  const auto hex = generate_polygon({PolygonFamily::regular, 6, 0.0, 0.0, 1.0, 0});
  const double rms = oracle::boundary_rms_numeric(as_vector(hex));
  EXPECT_NEAR(1.0 / rms, kHexagonNormalizedCircumradius, 1e-8);
  const auto normalized = normalize_pose(hex);
  for (const auto& v : normalized.vertices()) {
    EXPECT_NEAR(v.norm(), kHexagonNormalizedCircumradius, 1e-12);
  }
}

TEST(NormalizePose, ScaleInvariant) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto p = generate_polygon({PolygonFamily::random_star, 7, 0.0, 0.0, 1.0, seed});
    auto a = normalize_pose(p);
    auto b = normalize_pose(transformed(p, 7.0, 0.0, {0, 0}));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a.vertices()[i].x, b.vertices()[i].x, 1e-9);
      EXPECT_NEAR(a.vertices()[i].y, b.vertices()[i].y, 1e-9);
    }
  }
}

TEST(NormalizePose, TranslationInvariantExactlyOnRepresentableShifts) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = generate_polygon({PolygonFamily::random_star, 8, 0.0, 0.0, 1.0,
                               static_cast<std::uint64_t>(trial)});
    // Snap to a dyadic grid so that shifted coordinates are exact.
    std::vector<Point2> snapped;
    for (const auto& v : p.vertices()) {
      snapped.push_back({std::ldexp(std::round(std::ldexp(v.x, 20)), -20),
                         std::ldexp(std::round(std::ldexp(v.y, 20)), -20)});
    }
    const Polygon base = Polygon::make(snapped);
    const Point2 shift{std::ldexp(std::round(rng.uniform(-1000, 1000) * 64), -6),
                       std::ldexp(std::round(rng.uniform(-1000, 1000) * 64), -6)};
    const Polygon moved = transformed(base, 1.0, 0.0, shift);
    EXPECT_EQ(normalize_pose(base), normalize_pose(moved));
  }
}

TEST(GeometricDescriptor, NearCircleIsNearlyConstant) {
  const auto p = normalize_pose(generate_polygon({PolygonFamily::regular, 64, 0.0, 0.0, 1.0, 0}));
  const auto d = geometric_descriptor(p, {});
  ASSERT_EQ(d.values.size(), 64u);
  const auto [mn, mx] = std::minmax_element(d.values.begin(), d.values.end());
  EXPECT_LT(*mx - *mn, 0.002);
  // Regular-polygon radius bounds: inradius = R cos(pi / n).
  const double R = p.vertices()[0].norm();
  for (double v : d.values) {
    EXPECT_LE(v, R + 1e-12);
    EXPECT_GE(v, R * std::cos(std::numbers::pi / 64) - 1e-12);
  }
}

TEST(GeometricDescriptor, SquareIsFourPeriodic) {
  const auto p = normalize_pose(generate_polygon({PolygonFamily::regular, 4, 0.0, 0.3, 2.0, 0}));
  const auto d = geometric_descriptor(p, {});
  const double corner = std::sqrt(6.0) / 2.0;
  for (int k : {0, 16, 32, 48}) EXPECT_NEAR(d.values[static_cast<std::size_t>(k)], corner, 1e-12);
  for (std::size_t i = 0; i < 48; ++i) EXPECT_NEAR(d.values[i], d.values[i + 16], 1e-12);
  // Edge midpoints sit at the inradius sqrt(3)/2.
  EXPECT_NEAR(d.values[8], std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(GeometricDescriptor, RotationGivesCircularShift) {
  MetricConfig mc{Metric::euclidean, Alignment::circular_shift};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = generate_polygon({PolygonFamily::random_star, 9, 0.0, 0.0, 1.0, seed});
    const double angle = 0.1 + 0.37 * static_cast<double>(seed);
    const auto a = geometric_descriptor(normalize_pose(p), {});
    const auto b = geometric_descriptor(normalize_pose(transformed(p, 1.0, angle, {0, 0})), {});
    EXPECT_LT(aligned_distance(a, b, mc).distance, 1e-6);
  }
}

TEST(GeometricDescriptor, StartsAtFarthestVertex) {
  const auto p = normalize_pose(generate_polygon({PolygonFamily::random_star, 9, 0.0, 0.0, 1.0, 4}));
  const auto d = geometric_descriptor(p, {});
  EXPECT_DOUBLE_EQ(d.values[0], *std::max_element(d.values.begin(), d.values.end()));
}

TEST(VisualDescriptor, SinglePointOneCell) {
  const auto d = visual_descriptor(PointSet({{1.0, 0.0}}), {});
  ASSERT_EQ(d.values.size(), 80u);
  int nonzero = 0;
  for (double v : d.values) {
    if (v != 0.0) {
      ++nonzero;
      EXPECT_EQ(v, 1.0);
    }
  }
  EXPECT_EQ(nonzero, 1);
}

TEST(VisualDescriptor, RotationByWedgeShiftsWedges) {
  DescriptorConfig cfg;
  Rng rng(8);
  std::vector<Point2> pts, rotated;
  const double step = 2.0 * std::numbers::pi / cfg.wedges;
  for (int i = 0; i < 200; ++i) {
    const double r = rng.uniform(0.05, 3.0);
    // Keep clear of wedge boundaries.
    const double a = (std::floor(rng.uniform(0, cfg.wedges)) + rng.uniform(0.1, 0.9)) * step;
    pts.push_back({r * std::cos(a), r * std::sin(a)});
    rotated.push_back({r * std::cos(a + step), r * std::sin(a + step)});
  }
  const auto d0 = visual_descriptor(std::span<const Point2>(pts), cfg);
  const auto d1 = visual_descriptor(std::span<const Point2>(rotated), cfg);
  for (int ring = 0; ring < cfg.rings; ++ring) {
    for (int w = 0; w < cfg.wedges; ++w) {
      EXPECT_EQ(d0.values[static_cast<std::size_t>(ring * cfg.wedges + w)],
                d1.values[static_cast<std::size_t>(ring * cfg.wedges + (w + 1) % cfg.wedges)]);
    }
  }
}

TEST(VisualDescriptor, SquareSamplesMatchIndependentBinning) {
  DescriptorConfig cfg;
  cfg.samples = 256;
  const auto sq = normalize_pose(Polygon::make({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  const auto samples = resample_boundary(sq, 256);
  const auto d = describe_polygon(sq, DescriptorKind::visual, cfg);
  const auto expected = oracle::log_polar_histogram(samples, cfg.rings, cfg.wedges);
  ASSERT_EQ(d.values.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_DOUBLE_EQ(d.values[i], expected[i]);
}

TEST(VisualDescriptor, IsProbabilityVector) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = normalize_pose(generate_polygon({PolygonFamily::random_star, 11, 0.0, 0.0, 1.0, seed}));
    const auto d = describe_polygon(p, DescriptorKind::visual, {});
    double sum = 0.0;
    for (double v : d.values) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(VisualDescriptor, RejectsEmpty) {
  try {
    visual_descriptor(std::span<const Point2>{}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_input);
  }
}

TEST(DescriptorConfig, ValidatesAndHashesDistinctly) {
  DescriptorConfig bad;
  bad.samples = 4;
  EXPECT_THROW(bad.validate(), Error);
  bad = {};
  bad.rings = 1;
  EXPECT_THROW(bad.validate(), Error);
  bad = {};
  bad.wedges = 3;
  EXPECT_THROW(bad.validate(), Error);

  DescriptorConfig a, b;
  b.wedges = 8;
  EXPECT_NE(config_hash(DescriptorKind::visual, a), config_hash(DescriptorKind::visual, b));
  EXPECT_NE(config_hash(DescriptorKind::visual, a), config_hash(DescriptorKind::geometric, a));
}
