#pragma once

// Brute-force reference computations used only by the tests. None of these
// call into the library's hull, descriptor or metric code.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "shapelearn/geometry.hpp"
#include "shapelearn/random.hpp"

namespace oracle {

using shapelearn::Point2;

inline double orient(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool in_closed_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
  const double d1 = orient(a, b, p);
  const double d2 = orient(b, c, p);
  const double d3 = orient(c, a, p);
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

inline bool on_closed_segment(const Point2& p, const Point2& a, const Point2& b) {
  return orient(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

/// Triple test: p is a (strict) hull vertex iff no triangle or segment of
/// other points contains it. O(n^4) overall; meant for n <= 12.
inline std::vector<Point2> hull_vertices_by_triples(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool covered = false;
    for (std::size_t a = 0; a < n && !covered; ++a) {
      if (a == i) continue;
      for (std::size_t b = a + 1; b < n && !covered; ++b) {
        if (b == i) continue;
        if (on_closed_segment(pts[i], pts[a], pts[b])) covered = true;
        for (std::size_t c = b + 1; c < n && !covered; ++c) {
          if (c == i) continue;
          const double area = orient(pts[a], pts[b], pts[c]);
          if (area != 0 && in_closed_triangle(pts[i], pts[a], pts[b], pts[c])) covered = true;
        }
      }
    }
    if (!covered) out.push_back(pts[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Edge test: (a, b) is a hull edge iff every other point is left of or on
/// line ab, and points on the line lie within [a, b]. O(n^3).
inline std::vector<Point2> hull_vertices_by_edges(const std::vector<Point2>& pts) {
  const std::size_t n = pts.size();
  if (n <= 2) {
    auto out = pts;
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<bool> vertex(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      bool edge = true;
      for (std::size_t c = 0; c < n && edge; ++c) {
        if (c == a || c == b) continue;
        const double o = orient(pts[a], pts[b], pts[c]);
        if (o < 0) edge = false;
        if (o == 0 && !on_closed_segment(pts[c], pts[a], pts[b])) edge = false;
      }
      if (edge) vertex[a] = vertex[b] = true;
    }
  }
  std::vector<Point2> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (vertex[i]) out.push_back(pts[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Peel {
  std::vector<std::vector<Point2>> layers;  // each sorted
  std::vector<Point2> residual;             // sorted
};

/// Convex layers by repeated brute-force hulls.
inline Peel peel_by_edges(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Peel out;
  while (pts.size() > 2) {
    auto layer = hull_vertices_by_edges(pts);
    std::vector<Point2> rest;
    for (const auto& p : pts) {
      if (!std::binary_search(layer.begin(), layer.end(), p)) rest.push_back(p);
    }
    out.layers.push_back(std::move(layer));
    pts = std::move(rest);
  }
  out.residual = pts;
  return out;
}

inline bool point_in_polygon(const Point2& p, const std::vector<Point2>& v) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y) &&
        p.x < (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x) {
      inside = !inside;
    }
  }
  return inside;
}

/// RMS distance to the origin of points sampled densely and uniformly along
/// the closed boundary (midpoint rule per edge).
inline double boundary_rms_numeric(const std::vector<Point2>& v, int per_edge = 20000) {
  double acc = 0.0;
  double len = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    const double l = std::hypot(b.x - a.x, b.y - a.y);
    for (int k = 0; k < per_edge; ++k) {
      const double t = (k + 0.5) / per_edge;
      const double x = a.x + (b.x - a.x) * t;
      const double y = a.y + (b.y - a.y) * t;
      acc += (x * x + y * y) * l / per_edge;
    }
    len += l;
  }
  return std::sqrt(acc / len);
}

/// Log-polar bin by explicit comparison against the list of ring edges.
inline std::vector<double> log_polar_histogram(const std::vector<Point2>& pts, int rings, int wedges) {
  std::vector<double> edges;
  for (int i = 0; i <= rings; ++i) edges.push_back(0.125 * std::pow(20.0, double(i) / rings));
  std::vector<double> h(static_cast<std::size_t>(rings * wedges), 0.0);
  for (const auto& p : pts) {
    const double r = std::hypot(p.x, p.y);
    int ring = 0;
    for (int i = 1; i < rings; ++i) {
      if (r >= edges[static_cast<std::size_t>(i)]) ring = i;
    }
    double a = std::atan2(p.y, p.x);
    if (a < 0) a += 2 * std::numbers::pi;
    int wedge = 0;
    for (int w = 1; w < wedges; ++w) {
      if (a >= 2 * std::numbers::pi * w / wedges) wedge = w;
    }
    h[static_cast<std::size_t>(ring * wedges + wedge)] += 1.0;
  }
  for (auto& x : h) x /= static_cast<double>(pts.size());
  return h;
}

inline std::vector<Point2> random_points(shapelearn::Rng& rng, std::size_t n) {
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(), rng.uniform()});
  return pts;
}

}  // namespace oracle
