#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapelearn/error.hpp"
#include "shapelearn/learner.hpp"

namespace shapelearn::harness {

// Learned-state file: a JSON document whose header carries the format
// version and the learner config hash, followed by the template library and
// the observation memory. Derived data (layers, descriptors) is stored as
// computed so reloading never recomputes anything.
inline constexpr int kStateFormatVersion = 1;

using ojson = nlohmann::ordered_json;

namespace detail {

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

inline ojson points_json(std::span<const Point2> pts) {
  auto a = ojson::array();
  for (const auto& p : pts) a.push_back({p.x, p.y});
  return a;
}

inline std::vector<Point2> points_from(const nlohmann::json& j) {
  std::vector<Point2> out;
  for (const auto& v : j) out.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  return out;
}

inline ojson descriptor_json(const Descriptor& d) { return d.values; }

inline Descriptor descriptor_from(const nlohmann::json& j, const LearnerConfig& cfg) {
  Descriptor d;
  d.kind = cfg.descriptor;
  d.config_hash = config_hash(cfg.descriptor, cfg.descriptor_config);
  if (cfg.descriptor == DescriptorKind::visual) {
    d.rings = cfg.descriptor_config.rings;
    d.wedges = cfg.descriptor_config.wedges;
  }
  d.values = j.get<std::vector<double>>();
  return d;
}

inline ojson embedding_json(const Embedding& e) {
  ojson j;
  j["library_version"] = e.library_version;
  j["values"] = e.values;
  return j;
}

inline Embedding embedding_from(const nlohmann::json& j) {
  return {j.at("values").get<std::vector<double>>(), j.at("library_version").get<std::uint64_t>()};
}

inline ojson config_json(const LearnerConfig& c) {
  ojson j;
  j["tau"] = c.tau;
  j["descriptor"] = to_string(c.descriptor);
  j["samples"] = c.descriptor_config.samples;
  j["rings"] = c.descriptor_config.rings;
  j["wedges"] = c.descriptor_config.wedges;
  j["metric"] = to_string(c.metric.metric);
  j["alignment"] = to_string(c.metric.alignment);
  j["update_templates"] = c.update_templates;
  j["classify_mode"] = to_string(c.classify_mode);
  j["k"] = c.k;
  return j;
}

inline DescriptorKind parse_descriptor_kind(const std::string& s) {
  if (s == "geometric") return DescriptorKind::geometric;
  if (s == "visual") return DescriptorKind::visual;
  throw Error(ErrorCode::invalid_input, "unknown descriptor '" + s + "'");
}

inline Metric parse_metric(const std::string& s) {
  if (s == "euclidean") return Metric::euclidean;
  if (s == "correlation") return Metric::correlation;
  throw Error(ErrorCode::invalid_input, "unknown metric '" + s + "'");
}

inline Alignment parse_alignment(const std::string& s) {
  if (s == "none") return Alignment::none;
  if (s == "shift") return Alignment::circular_shift;
  throw Error(ErrorCode::invalid_input, "unknown alignment '" + s + "'");
}

inline ClassifyMode parse_classify_mode(const std::string& s) {
  if (s == "template") return ClassifyMode::template_similarity;
  if (s == "knn") return ClassifyMode::knn;
  throw Error(ErrorCode::invalid_input, "unknown classify mode '" + s + "'");
}

inline LearnerConfig config_from(const nlohmann::json& j) {
  LearnerConfig c;
  c.tau = j.at("tau").get<double>();
  c.descriptor = parse_descriptor_kind(j.at("descriptor").get<std::string>());
  c.descriptor_config.samples = j.at("samples").get<int>();
  c.descriptor_config.rings = j.at("rings").get<int>();
  c.descriptor_config.wedges = j.at("wedges").get<int>();
  c.metric.metric = parse_metric(j.at("metric").get<std::string>());
  c.metric.alignment = parse_alignment(j.at("alignment").get<std::string>());
  c.update_templates = j.at("update_templates").get<bool>();
  c.classify_mode = parse_classify_mode(j.at("classify_mode").get<std::string>());
  c.k = j.at("k").get<int>();
  return c;
}

inline ojson template_json(const Template& t) {
  ojson j;
  j["id"] = t.id;
  j["member_ids"] = t.member_ids;
  j["points"] = points_json(t.pooled.points());
  auto layers = ojson::array();
  for (const auto& layer : t.layers.layers) {
    ojson l;
    l["degenerate"] = std::holds_alternative<DegenerateHull>(layer);
    l["vertices"] = points_json(hull_points(layer));
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  j["residual"] = points_json(t.layers.residual);
  auto descs = ojson::array();
  for (const auto& d : t.layer_descriptors) descs.push_back(descriptor_json(d));
  j["descriptors"] = std::move(descs);
  return j;
}

inline Template template_from(const nlohmann::json& j, const LearnerConfig& cfg) {
  Template t;
  t.id = j.at("id").get<std::size_t>();
  t.member_ids = j.at("member_ids").get<std::vector<std::int64_t>>();
  t.pooled = PointSet(points_from(j.at("points")));
  for (const auto& l : j.at("layers")) {
    auto verts = points_from(l.at("vertices"));
    if (l.at("degenerate").get<bool>()) {
      t.layers.layers.emplace_back(DegenerateHull{std::move(verts)});
    } else {
      t.layers.layers.emplace_back(Polygon::make(std::move(verts)));
    }
  }
  t.layers.residual = points_from(j.at("residual"));
  for (const auto& d : j.at("descriptors")) t.layer_descriptors.push_back(descriptor_from(d, cfg));
  return t;
}

}  // namespace detail

inline std::string serialize_state(const Learner& learner) {
  const auto& cfg = learner.config();
  ojson j;
  j["format_version"] = kStateFormatVersion;
  j["config_hash"] = detail::hex64(cfg.hash());
  j["config"] = detail::config_json(cfg);
  j["library_version"] = learner.library().version();
  j["next_observation_id"] = learner.next_observation_id();

  auto templates = ojson::array();
  for (const auto& t : learner.library().templates()) templates.push_back(detail::template_json(t));
  j["templates"] = std::move(templates);

  auto memory = ojson::array();
  for (const auto& r : learner.memory().records()) {
    ojson m;
    m["observation_id"] = r.observation_id;
    m["kind"] = to_string(r.kind);
    m["category"] = r.category;
    m["best_similarity"] = r.best_similarity;
    m["points"] = detail::points_json(r.points.points());
    m["descriptor"] = detail::descriptor_json(r.descriptor);
    m["embedding"] = detail::embedding_json(r.embedding);
    memory.push_back(std::move(m));
  }
  j["memory"] = std::move(memory);
  return j.dump(1) + "\n";
}

inline Learner deserialize_state(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version != kStateFormatVersion) {
      throw Error(ErrorCode::parse_error, "unsupported state format version " + std::to_string(version));
    }
    const LearnerConfig cfg = detail::config_from(j.at("config"));
    if (j.at("config_hash").get<std::string>() != detail::hex64(cfg.hash())) {
      throw Error(ErrorCode::parse_error, "config hash does not match config");
    }

    TemplateLibrary lib(cfg.descriptor, cfg.descriptor_config, cfg.metric);
    for (const auto& t : j.at("templates")) lib.append(detail::template_from(t, cfg));
    lib.set_version(j.at("library_version").get<std::uint64_t>());

    Memory memory;
    for (const auto& m : j.at("memory")) {
      MemoryRecord r;
      r.observation_id = m.at("observation_id").get<std::int64_t>();
      const auto kind = m.at("kind").get<std::string>();
      if (kind != "assigned" && kind != "created") {
        throw Error(ErrorCode::parse_error, "unknown decision kind '" + kind + "'");
      }
      r.kind = kind == "assigned" ? DecisionKind::assigned : DecisionKind::created;
      r.category = m.at("category").get<std::size_t>();
      r.best_similarity = m.at("best_similarity").get<double>();
      r.points = PointSet(detail::points_from(m.at("points")));
      r.descriptor = detail::descriptor_from(m.at("descriptor"), cfg);
      r.embedding = detail::embedding_from(m.at("embedding"));
      memory.append(std::move(r));
    }
    return Learner(cfg, std::move(lib), std::move(memory),
                   j.at("next_observation_id").get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("state file: ") + e.what());
  }
}

}  // namespace shapelearn::harness
