#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "shapelearn/descriptors.hpp"
#include "shapelearn/error.hpp"

namespace shapelearn {

enum class Metric { euclidean, correlation };
enum class Alignment { none, circular_shift };

inline const char* to_string(Metric m) {
  return m == Metric::euclidean ? "euclidean" : "correlation";
}
inline const char* to_string(Alignment a) { return a == Alignment::none ? "none" : "shift"; }

struct MetricConfig {
  Metric metric = Metric::euclidean;
  Alignment alignment = Alignment::circular_shift;
  friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

struct AlignedDistance {
  double distance = 0.0;
  int shift = 0;
};

namespace detail {

inline void require_comparable(const Descriptor& a, const Descriptor& b) {
  if (a.config_hash != b.config_hash || a.kind != b.kind || a.values.size() != b.values.size()) {
    throw Error(ErrorCode::incomparable_descriptors, "descriptor configurations differ");
  }
}

// Index into b paired with a[i] under `shift`. Geometric descriptors rotate
// the whole vector; visual descriptors rotate wedges inside every ring.
struct ShiftView {
  const Descriptor& d;
  int shift;
  double operator[](std::size_t i) const {
    const std::size_t n = d.values.size();
    if (d.kind == DescriptorKind::visual) {
      const auto w = static_cast<std::size_t>(d.wedges);
      const std::size_t ring = i / w;
      const std::size_t wedge = (i % w + static_cast<std::size_t>(shift)) % w;
      return d.values[ring * w + wedge];
    }
    return d.values[(i + static_cast<std::size_t>(shift)) % n];
  }
};

inline double euclidean(const Descriptor& a, ShiftView b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double diff = a.values[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

inline bool zero_variance(const std::vector<double>& v, double mean, double ss) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  return !(ss > static_cast<double>(v.size()) * tol * tol) || !std::isfinite(mean);
}

inline double correlation(const Descriptor& a, ShiftView b) {
  const std::size_t n = a.values.size();
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a.values[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a.values[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (zero_variance(a.values, ma, saa) || zero_variance(b.d.values, mb, sbb)) {
    throw Error(ErrorCode::zero_variance, "correlation undefined for constant descriptor");
  }
  const double r = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
  return 1.0 - r;
}

inline double base_distance(const Descriptor& a, ShiftView b, Metric m) {
  return m == Metric::euclidean ? euclidean(a, b) : correlation(a, b);
}

}  // namespace detail

inline double euclidean_distance(const Descriptor& a, const Descriptor& b) {
  detail::require_comparable(a, b);
  return detail::euclidean(a, {b, 0});
}

/// 1 - Pearson correlation, in [0, 2].
inline double correlation_distance(const Descriptor& a, const Descriptor& b) {
  detail::require_comparable(a, b);
  if (a.values.empty()) throw Error(ErrorCode::zero_variance, "empty descriptor");
  return detail::correlation(a, {b, 0});
}

inline double distance(const Descriptor& a, const Descriptor& b, Metric m) {
  return m == Metric::euclidean ? euclidean_distance(a, b) : correlation_distance(a, b);
}

inline int shift_count(const Descriptor& d) {
  return d.kind == DescriptorKind::visual ? d.wedges : static_cast<int>(d.values.size());
}

/// Minimum distance over all circular shifts of `b` (wedge shifts for visual
/// descriptors). Ties resolve to the smallest shift.
inline AlignedDistance aligned_distance(const Descriptor& a, const Descriptor& b,
                                        const MetricConfig& cfg) {
  detail::require_comparable(a, b);
  if (cfg.metric == Metric::correlation && a.values.empty()) {
    throw Error(ErrorCode::zero_variance, "empty descriptor");
  }
  if (cfg.alignment == Alignment::none) {
    return {detail::base_distance(a, {b, 0}, cfg.metric), 0};
  }
  AlignedDistance best{std::numeric_limits<double>::infinity(), 0};
  const int shifts = std::max(1, shift_count(b));
  for (int s = 0; s < shifts; ++s) {
    const double d = detail::base_distance(a, {b, s}, cfg.metric);
    if (d < best.distance) best = {d, s};
  }
  return best;
}

/// Maps a distance to a similarity in (0, 1].
inline double similarity(double d) {
  if (!(d >= 0.0)) throw Error(ErrorCode::invalid_input, "distance must be non-negative");
  return 1.0 / (1.0 + d);
}

}  // namespace shapelearn
