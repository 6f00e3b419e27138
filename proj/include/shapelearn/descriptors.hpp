#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "shapelearn/error.hpp"
#include "shapelearn/geometry.hpp"
#include "shapelearn/random.hpp"

namespace shapelearn {

enum class DescriptorKind { geometric, visual };

inline const char* to_string(DescriptorKind k) {
  return k == DescriptorKind::geometric ? "geometric" : "visual";
}

// Log-polar ring edges span [kVisualInnerRadius, kVisualOuterRadius] in
// normalized units. Points inside the inner edge fall in ring 0, points past
// the outer edge in the last ring.
inline constexpr double kVisualInnerRadius = 0.125;
inline constexpr double kVisualOuterRadius = 2.5;

struct DescriptorConfig {
  int samples = 64;  // boundary samples, both descriptor kinds
  int rings = 5;
  int wedges = 16;

  void validate() const {
    if (samples < 8) throw Error(ErrorCode::invalid_input, "samples must be >= 8");
    if (rings < 2) throw Error(ErrorCode::invalid_input, "rings must be >= 2");
    if (wedges < 4) throw Error(ErrorCode::invalid_input, "wedges must be >= 4");
  }

  friend bool operator==(const DescriptorConfig&, const DescriptorConfig&) = default;
};

inline std::string config_fingerprint(DescriptorKind kind, const DescriptorConfig& cfg) {
  if (kind == DescriptorKind::geometric) {
    return "geometric;samples=" + std::to_string(cfg.samples);
  }
  return "visual;samples=" + std::to_string(cfg.samples) + ";rings=" + std::to_string(cfg.rings) +
         ";wedges=" + std::to_string(cfg.wedges) + ";inner=0.125;outer=2.5";
}

inline std::uint64_t config_hash(DescriptorKind kind, const DescriptorConfig& cfg) {
  return fnv1a(config_fingerprint(kind, cfg));
}

/// Fixed-length shape vector. Two descriptors may be compared only when
/// their config hashes match.
struct Descriptor {
  DescriptorKind kind = DescriptorKind::geometric;
  std::vector<double> values;
  std::uint64_t config_hash = 0;
  int rings = 0;   // visual only
  int wedges = 0;  // visual only

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

namespace detail {

// Mean of |p|^2 along the boundary, per unit length, in closed form.
inline double boundary_mean_square_radius(std::span<const Point2> v) {
  double len_total = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    const double len = (b - a).norm();
    len_total += len;
    acc += len * (a.squared_norm() + dot(a, b) + b.squared_norm()) / 3.0;
  }
  return acc / len_total;
}

inline double angle_0_2pi(const Point2& p) {
  double a = std::atan2(p.y, p.x);
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a;
}

inline std::size_t signature_start(std::span<const Point2> v) {
  double rmax = 0.0;
  for (const auto& p : v) rmax = std::max(rmax, p.norm());
  std::size_t best = v.size();
  double best_angle = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].norm() < rmax * (1.0 - 1e-12)) continue;
    const double a = angle_0_2pi(v[i]);
    if (best == v.size() || a < best_angle) {
      best = i;
      best_angle = a;
    }
  }
  return best;
}

}  // namespace detail

/// Centers the area centroid on the origin and scales so the RMS distance
/// of the boundary (integrated by arc length) to the origin is 1.
inline Polygon normalize_pose(const Polygon& poly) {
  const auto v = poly.vertices();
  const Point2 anchor = v[0];
  std::vector<Point2> rel;
  rel.reserve(v.size());
  for (const auto& p : v) rel.push_back(p - anchor);

  // centroid() re-anchors at rel[0] == (0, 0), which is a no-op.
  const double area2 = detail::shoelace2(rel);
  if (!(area2 > 0.0)) throw Error(ErrorCode::invalid_input, "zero-area polygon");
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0, n = rel.size(); i < n; ++i) {
    const Point2& p = rel[i];
    const Point2& q = rel[(i + 1) % n];
    const double c = p.x * q.y - q.x * p.y;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  const Point2 c{cx / (3.0 * area2), cy / (3.0 * area2)};
  for (auto& p : rel) p = p - c;

  const double rms = std::sqrt(detail::boundary_mean_square_radius(rel));
  if (!(rms > 0.0) || !std::isfinite(rms)) {
    throw Error(ErrorCode::invalid_input, "degenerate polygon scale");
  }
  for (auto& p : rel) p = p / rms;
  return Polygon::make(std::move(rel));
}

/// `count` boundary points equally spaced by arc length, walking CCW from
/// the vertex farthest from the origin (ties: smallest polar angle).
inline std::vector<Point2> resample_boundary(const Polygon& poly, int count) {
  const auto v = poly.vertices();
  const std::size_t k = v.size();
  const std::size_t start = detail::signature_start(v);

  std::vector<double> lengths(k);
  double total = 0.0;
  for (std::size_t e = 0; e < k; ++e) {
    lengths[e] = (v[(start + e + 1) % k] - v[(start + e) % k]).norm();
    total += lengths[e];
  }

  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t edge = 0;
  double before = 0.0;
  for (int j = 0; j < count; ++j) {
    const double target = total * j / count;
    while (edge + 1 < k && before + lengths[edge] <= target) {
      before += lengths[edge];
      ++edge;
    }
    const Point2& a = v[(start + edge) % k];
    const Point2& b = v[(start + edge + 1) % k];
    const double t = lengths[edge] > 0.0 ? (target - before) / lengths[edge] : 0.0;
    out.push_back(a + (b - a) * t);
  }
  return out;
}

/// Centroid-distance signature of a pose-normalized polygon.
inline Descriptor geometric_descriptor(const Polygon& normalized, const DescriptorConfig& cfg) {
  cfg.validate();
  Descriptor d;
  d.kind = DescriptorKind::geometric;
  d.config_hash = config_hash(DescriptorKind::geometric, cfg);
  for (const auto& p : resample_boundary(normalized, cfg.samples)) d.values.push_back(p.norm());
  return d;
}

inline int visual_ring(double r, int rings) {
  if (!(r > kVisualInnerRadius)) return 0;
  const double pos =
      rings * std::log(r / kVisualInnerRadius) / std::log(kVisualOuterRadius / kVisualInnerRadius);
  return std::min(rings - 1, static_cast<int>(std::floor(pos)));
}

inline int visual_wedge(const Point2& p, int wedges) {
  const double a = detail::angle_0_2pi(p);
  const int w = static_cast<int>(std::floor(a * wedges / (2.0 * std::numbers::pi)));
  return std::clamp(w, 0, wedges - 1);
}

/// Log-polar occupancy histogram of pose-normalized points, ring-major
/// (entry ring * wedges + wedge). Entries are occupancy fractions.
inline Descriptor visual_descriptor(std::span<const Point2> points, const DescriptorConfig& cfg) {
  cfg.validate();
  if (points.empty()) throw Error(ErrorCode::invalid_input, "empty point set");
  detail::require_finite(points);
  std::vector<std::size_t> counts(static_cast<std::size_t>(cfg.rings * cfg.wedges), 0);
  for (const auto& p : points) {
    const int ring = visual_ring(p.norm(), cfg.rings);
    const int wedge = visual_wedge(p, cfg.wedges);
    ++counts[static_cast<std::size_t>(ring * cfg.wedges + wedge)];
  }
  Descriptor d;
  d.kind = DescriptorKind::visual;
  d.config_hash = config_hash(DescriptorKind::visual, cfg);
  d.rings = cfg.rings;
  d.wedges = cfg.wedges;
  const double n = static_cast<double>(points.size());
  for (auto c : counts) d.values.push_back(static_cast<double>(c) / n);
  return d;
}

inline Descriptor visual_descriptor(const PointSet& points, const DescriptorConfig& cfg) {
  return visual_descriptor(points.points(), cfg);
}

/// Descriptor of a pose-normalized polygon. The visual kind bins the same
/// arc-length boundary samples the geometric signature uses.
inline Descriptor describe_polygon(const Polygon& normalized, DescriptorKind kind,
                                   const DescriptorConfig& cfg) {
  if (kind == DescriptorKind::geometric) return geometric_descriptor(normalized, cfg);
  cfg.validate();
  const auto samples = resample_boundary(normalized, cfg.samples);
  return visual_descriptor(std::span<const Point2>(samples), cfg);
}

}  // namespace shapelearn
