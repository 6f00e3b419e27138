#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "shapelearn/error.hpp"
#include "shapelearn/geometry.hpp"
#include "shapelearn/random.hpp"

namespace shapelearn {

enum class PolygonFamily { regular, perturbed, random_star };

struct PolygonSpec {
  PolygonFamily family = PolygonFamily::regular;
  int n = 3;
  double jitter = 0.0;    // fraction of scale; perturbed family only
  double rotation = 0.0;  // radians
  double scale = 1.0;     // circumradius of the unperturbed shape
  std::uint64_t seed = 0;
};

inline constexpr int kMaxGenerationAttempts = 64;

namespace detail {

inline std::vector<Point2> draw_vertices(const PolygonSpec& spec, Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int n = spec.n;
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n));

  if (spec.family == PolygonFamily::random_star) {
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (auto& a : angles) a = rng.uniform(0.0, two_pi);
    std::sort(angles.begin(), angles.end());
    for (double a : angles) {
      const double r = rng.uniform(0.5, 1.0) * spec.scale;
      const double t = a + spec.rotation;
      out.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return out;
  }

  // First vertex points straight up before rotation.
  for (int k = 0; k < n; ++k) {
    const double t = std::numbers::pi / 2.0 + spec.rotation + two_pi * k / n;
    double radial = spec.scale;
    double tangential = 0.0;
    if (spec.family == PolygonFamily::perturbed) {
      radial += rng.uniform(-spec.jitter, spec.jitter) * spec.scale;
      tangential = rng.uniform(-spec.jitter, spec.jitter) * spec.scale;
    }
    const double c = std::cos(t);
    const double s = std::sin(t);
    out.push_back({radial * c - tangential * s, radial * s + tangential * c});
  }
  return out;
}

}  // namespace detail

/// Synthesizes a valid polygon. Deterministic in spec.seed; a draw that fails
/// polygon validation is redrawn from a derived sub-seed.
inline Polygon generate_polygon(const PolygonSpec& spec) {
  if (spec.n < 3) throw Error(ErrorCode::invalid_input, "n must be at least 3");
  if (!(spec.jitter >= 0.0 && spec.jitter < 0.5)) {
    throw Error(ErrorCode::invalid_input, "jitter must lie in [0, 0.5)");
  }
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale) || !std::isfinite(spec.rotation)) {
    throw Error(ErrorCode::invalid_input, "scale must be positive and finite");
  }
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Rng rng(attempt == 0 ? spec.seed : mix_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    try {
      return Polygon::make(detail::draw_vertices(spec, rng));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::invalid_input) throw;
    }
  }
  throw Error(ErrorCode::generation_failure,
              "no valid polygon after " + std::to_string(kMaxGenerationAttempts) + " attempts");
}

}  // namespace shapelearn
