#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "shapelearn/templates.hpp"

namespace shapelearn::harness {

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace detail

/// SVG drawing of a template's convex layers, outermost first, one closed
/// path per layer, with residual points as dots. The y axis is flipped so the
/// picture reads in the usual math orientation.
inline std::string render_template_svg(const Template& t) {
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  const auto grow = [&](const Point2& p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, -p.y);
    ymax = std::max(ymax, -p.y);
  };
  for (const auto& layer : t.layers.layers) {
    for (const auto& p : hull_points(layer)) grow(p);
  }
  for (const auto& p : t.layers.residual) grow(p);
  if (xmin > xmax) {
    xmin = ymin = -1.0;
    xmax = ymax = 1.0;
  }
  double extent = std::max(xmax - xmin, ymax - ymin);
  if (!(extent > 0.0)) extent = 1.0;
  const double margin = 0.05 * extent;
  const double stroke = 0.005 * extent;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + detail::num(xmin - margin) + " " +
         detail::num(ymin - margin) + " " + detail::num(xmax - xmin + 2 * margin) + " " +
         detail::num(ymax - ymin + 2 * margin) + "\">\n";
  out += "<title>template " + std::to_string(t.id) + "</title>\n";
  for (std::size_t i = 0; i < t.layers.layers.size(); ++i) {
    const auto pts = hull_points(t.layers.layers[i]);
    std::string d;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      d += (k == 0 ? "M " : " L ") + detail::num(pts[k].x) + " " + detail::num(-pts[k].y);
    }
    d += " Z";
    out += "<path class=\"layer\" data-layer=\"" + std::to_string(i) + "\" d=\"" + d +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"" + detail::num(stroke) + "\"/>\n";
  }
  for (const auto& p : t.layers.residual) {
    out += "<circle class=\"residual\" cx=\"" + detail::num(p.x) + "\" cy=\"" + detail::num(-p.y) +
           "\" r=\"" + detail::num(2 * stroke) + "\" fill=\"red\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace shapelearn::harness
