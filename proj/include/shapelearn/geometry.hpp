#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shapelearn/error.hpp"

namespace shapelearn {

// Orientation tolerance. Callers pre-scale data to unit RMS radius, which
// keeps an absolute tolerance meaningful.
inline constexpr double kOrientationEps = 1e-12;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  // Lexicographic: x, then y.
  friend auto operator<=>(const Point2& a, const Point2& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator/(double s) const { return {x / s, y / s}; }

  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

// Twice the signed area of triangle (o, a, b); positive for a left turn.
inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// +1 left turn, -1 right turn, 0 collinear within kOrientationEps.
inline int orientation(const Point2& o, const Point2& a, const Point2& b) {
  const double c = cross(o, a, b);
  if (c > kOrientationEps) return 1;
  if (c < -kOrientationEps) return -1;
  return 0;
}

namespace detail {

inline void require_finite(std::span<const Point2> pts) {
  for (const auto& p : pts) {
    if (!p.finite()) throw Error(ErrorCode::invalid_input, "non-finite coordinate");
  }
}

inline std::vector<Point2> sorted_unique(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool segments_touch(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

inline double shoelace2(std::span<const Point2> v) {
  double acc = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % n];
    acc += p.x * q.y - q.x * p.y;
  }
  return acc;
}

}  // namespace detail

/// Unordered set of distinct finite points. Stored sorted lexicographically;
/// exact duplicates are dropped on construction.
class PointSet {
 public:
  explicit PointSet(std::vector<Point2> pts) {
    detail::require_finite(pts);
    points_ = detail::sorted_unique(std::move(pts));
    if (points_.empty()) throw Error(ErrorCode::invalid_input, "empty point set");
  }

  std::span<const Point2> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Point2> points_;
};

/// Simple, strictly counter-clockwise polygon with no three consecutive
/// collinear vertices. Vertices are stored in canonical order: CCW, starting
/// at the lexicographically smallest vertex, so equality is list equality.
class Polygon {
 public:
  // Validates and canonicalizes; clockwise input is reversed.
  static Polygon make(std::vector<Point2> vertices) {
    detail::require_finite(vertices);
    const std::size_t k = vertices.size();
    if (k < 3) throw Error(ErrorCode::invalid_input, "polygon needs at least 3 vertices");

    const double area2 = detail::shoelace2(vertices);
    if (!(std::abs(area2) > 2.0 * kOrientationEps)) {
      throw Error(ErrorCode::invalid_input, "polygon has zero area");
    }
    if (area2 < 0) std::reverse(vertices.begin(), vertices.end());

    for (std::size_t i = 0; i < k; ++i) {
      const auto& prev = vertices[(i + k - 1) % k];
      const auto& next = vertices[(i + 1) % k];
      if (vertices[i] == prev || orientation(prev, vertices[i], next) == 0) {
        throw Error(ErrorCode::invalid_input,
                    "degenerate or collinear vertex at index " + std::to_string(i));
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 2; j < k; ++j) {
        if (i == 0 && j == k - 1) continue;  // adjacent through the wrap
        if (detail::segments_touch(vertices[i], vertices[(i + 1) % k], vertices[j],
                                   vertices[(j + 1) % k])) {
          throw Error(ErrorCode::invalid_input, "polygon self-intersects");
        }
      }
    }

    auto first = std::min_element(vertices.begin(), vertices.end());
    std::rotate(vertices.begin(), first, vertices.end());
    return Polygon(std::move(vertices));
  }

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  explicit Polygon(std::vector<Point2> v) : vertices_(std::move(v)) {}
  std::vector<Point2> vertices_;
};

/// Hull of fewer than three non-collinear points: the one or two extreme
/// points, lexicographically ordered.
struct DegenerateHull {
  std::vector<Point2> extremes;
  friend bool operator==(const DegenerateHull&, const DegenerateHull&) = default;
};

using HullResult = std::variant<Polygon, DegenerateHull>;

inline std::span<const Point2> hull_points(const HullResult& h) {
  if (const auto* poly = std::get_if<Polygon>(&h)) return poly->vertices();
  return std::get<DegenerateHull>(h).extremes;
}

namespace detail {

// Andrew's monotone chain on sorted, distinct input. Collinear points on hull
// edges are dropped.
inline HullResult monotone_chain(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return DegenerateHull{{pts.begin(), pts.end()}};

  std::vector<Point2> hull;
  hull.reserve(2 * n);
  for (const auto& p : pts) {
    while (hull.size() >= 2 && orientation(hull[hull.size() - 2], hull.back(), p) <= 0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    const auto& p = pts[i];
    while (hull.size() >= lower && orientation(hull[hull.size() - 2], hull.back(), p) <= 0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  hull.pop_back();  // first point repeated

  if (hull.size() < 3) return DegenerateHull{{pts.front(), pts.back()}};
  return Polygon::make(std::move(hull));
}

}  // namespace detail

/// Strict convex hull. Returns a CCW polygon starting at the lexicographically
/// smallest vertex, or a DegenerateHull when fewer than three points are in
/// general position.
inline HullResult convex_hull(const PointSet& points) {
  return detail::monotone_chain(points.points());
}

/// Convex layers, outermost first. Peeling stops once at most two points
/// remain; those become the residual.
struct LayerStack {
  std::vector<HullResult> layers;
  std::vector<Point2> residual;

  std::vector<Polygon> polygon_layers() const {
    std::vector<Polygon> out;
    for (const auto& layer : layers) {
      if (const auto* poly = std::get_if<Polygon>(&layer)) out.push_back(*poly);
    }
    return out;
  }

  friend bool operator==(const LayerStack&, const LayerStack&) = default;
};

inline LayerStack onion_peel(const PointSet& points) {
  LayerStack stack;
  std::vector<Point2> remaining(points.points().begin(), points.points().end());
  while (remaining.size() > 2) {
    HullResult hull = detail::monotone_chain(remaining);
    std::vector<Point2> consumed(hull_points(hull).begin(), hull_points(hull).end());
    std::sort(consumed.begin(), consumed.end());
    std::vector<Point2> rest;
    rest.reserve(remaining.size() - consumed.size());
    std::set_difference(remaining.begin(), remaining.end(), consumed.begin(), consumed.end(),
                        std::back_inserter(rest));
    remaining = std::move(rest);
    stack.layers.push_back(std::move(hull));
  }
  stack.residual = std::move(remaining);
  return stack;
}

inline double signed_area(const Polygon& poly) { return 0.5 * detail::shoelace2(poly.vertices()); }

// Area-weighted centroid. Computed relative to the first vertex, which keeps
// the result independent of where the polygon sits in the plane.
inline Point2 centroid(const Polygon& poly) {
  const auto v = poly.vertices();
  const Point2 origin = v[0];
  double area2 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2 p = v[i] - origin;
    const Point2 q = v[(i + 1) % n] - origin;
    const double c = p.x * q.y - q.x * p.y;
    area2 += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return origin + Point2{cx / (3.0 * area2), cy / (3.0 * area2)};
}

inline double perimeter(const Polygon& poly) {
  const auto v = poly.vertices();
  double len = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) len += (v[(i + 1) % n] - v[i]).norm();
  return len;
}

}  // namespace shapelearn
