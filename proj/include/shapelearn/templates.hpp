#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shapelearn/descriptors.hpp"
#include "shapelearn/error.hpp"
#include "shapelearn/geometry.hpp"
#include "shapelearn/metrics.hpp"

namespace shapelearn {

/// A learned category representative: the convex layers of the pooled
/// member points, and one descriptor per non-degenerate layer.
struct Template {
  std::size_t id = 0;
  PointSet pooled{std::vector<Point2>{{0.0, 0.0}}};
  LayerStack layers;
  std::vector<Descriptor> layer_descriptors;  // outermost first
  std::vector<std::int64_t> member_ids;

  std::size_t member_count() const { return member_ids.size(); }

  friend bool operator==(const Template&, const Template&) = default;
};

inline PointSet pool_points(std::span<const PointSet> members) {
  std::vector<Point2> all;
  for (const auto& m : members) all.insert(all.end(), m.points().begin(), m.points().end());
  return PointSet(std::move(all));
}

/// Builds a template from pose-normalized member point sets. Each polygon
/// layer is pose-normalized before it is described, so layers are compared
/// by shape alone.
inline Template build_template(const PointSet& pooled, std::vector<std::int64_t> member_ids,
                               std::size_t id, DescriptorKind kind, const DescriptorConfig& cfg) {
  Template t;
  t.id = id;
  t.pooled = pooled;
  t.layers = onion_peel(pooled);
  for (const auto& layer : t.layers.polygon_layers()) {
    t.layer_descriptors.push_back(describe_polygon(normalize_pose(layer), kind, cfg));
  }
  t.member_ids = std::move(member_ids);
  return t;
}

inline Template build_template(std::span<const PointSet> members,
                               std::vector<std::int64_t> member_ids, std::size_t id,
                               DescriptorKind kind, const DescriptorConfig& cfg) {
  if (members.empty()) throw Error(ErrorCode::invalid_input, "template needs members");
  return build_template(pool_points(members), std::move(member_ids), id, kind, cfg);
}

/// Weight of polygon layer i (outermost i = 0).
inline double layer_weight(std::size_t i) { return std::ldexp(1.0, -static_cast<int>(i)); }

/// Invoked when a correlation comparison against layer `layer` of template
/// `template_id` hits a constant descriptor and euclidean is used instead.
using FallbackHook = std::function<void(std::size_t template_id, std::size_t layer)>;

/// Layer-weighted mean of aligned distances. Without a fallback hook,
/// zero-variance errors propagate.
inline double template_distance(const Descriptor& obs, const Template& t, const MetricConfig& cfg,
                                const FallbackHook* on_fallback = nullptr) {
  if (t.layer_descriptors.empty()) {
    throw Error(ErrorCode::unusable_template,
                "template " + std::to_string(t.id) + " has no polygon layers");
  }
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < t.layer_descriptors.size(); ++i) {
    double d = 0.0;
    try {
      d = aligned_distance(obs, t.layer_descriptors[i], cfg).distance;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::zero_variance || on_fallback == nullptr || !*on_fallback) throw;
      (*on_fallback)(t.id, i);
      d = aligned_distance(obs, t.layer_descriptors[i], {Metric::euclidean, cfg.alignment}).distance;
    }
    weighted += layer_weight(i) * d;
    total += layer_weight(i);
  }
  return weighted / total;
}

struct Embedding {
  std::vector<double> values;
  std::uint64_t library_version = 0;
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// Ordered templates sharing one descriptor and metric configuration.
/// Ids are contiguous in creation order. `version` counts mutations.
class TemplateLibrary {
 public:
  TemplateLibrary() = default;
  TemplateLibrary(DescriptorKind kind, DescriptorConfig dcfg, MetricConfig mcfg)
      : kind_(kind), descriptor_config_(dcfg), metric_config_(mcfg) {
    descriptor_config_.validate();
  }

  DescriptorKind kind() const { return kind_; }
  const DescriptorConfig& descriptor_config() const { return descriptor_config_; }
  const MetricConfig& metric_config() const { return metric_config_; }
  std::uint64_t version() const { return version_; }
  std::size_t size() const { return templates_.size(); }
  bool empty() const { return templates_.empty(); }
  const std::vector<Template>& templates() const { return templates_; }

  const Template& at(std::size_t id) const {
    if (id >= templates_.size()) {
      throw Error(ErrorCode::not_found, "no template with id " + std::to_string(id));
    }
    return templates_[id];
  }

  void append(Template t) {
    if (t.id != templates_.size()) {
      throw Error(ErrorCode::invalid_input, "template ids must be contiguous");
    }
    templates_.push_back(std::move(t));
    ++version_;
  }

  void replace(Template t) {
    const std::size_t id = t.id;
    at(id);
    templates_[id] = std::move(t);
    ++version_;
  }

  // Restores a serialized version counter.
  void set_version(std::uint64_t v) { version_ = v; }

  Descriptor describe(const Polygon& normalized) const {
    return describe_polygon(normalized, kind_, descriptor_config_);
  }

  friend bool operator==(const TemplateLibrary&, const TemplateLibrary&) = default;

 private:
  DescriptorKind kind_ = DescriptorKind::geometric;
  DescriptorConfig descriptor_config_{};
  MetricConfig metric_config_{};
  std::vector<Template> templates_;
  std::uint64_t version_ = 0;
};

/// Similarity of an observation descriptor to every template, by id.
inline Embedding embed(const Descriptor& obs, const TemplateLibrary& lib,
                       const FallbackHook* on_fallback = nullptr) {
  if (lib.empty()) throw Error(ErrorCode::empty_library, "cannot embed against empty library");
  Embedding e;
  e.library_version = lib.version();
  e.values.reserve(lib.size());
  for (const auto& t : lib.templates()) {
    e.values.push_back(similarity(template_distance(obs, t, lib.metric_config(), on_fallback)));
  }
  return e;
}

}  // namespace shapelearn
