#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shapelearn/descriptors.hpp"
#include "shapelearn/error.hpp"
#include "shapelearn/geometry.hpp"
#include "shapelearn/metrics.hpp"
#include "shapelearn/random.hpp"
#include "shapelearn/templates.hpp"

namespace shapelearn {

enum class ClassifyMode { template_similarity, knn };

inline const char* to_string(ClassifyMode m) {
  return m == ClassifyMode::template_similarity ? "template" : "knn";
}

struct LearnerConfig {
  double tau = 0.8;  // similarity needed to join an existing category
  DescriptorKind descriptor = DescriptorKind::geometric;
  DescriptorConfig descriptor_config{};
  MetricConfig metric{};
  bool update_templates = false;
  ClassifyMode classify_mode = ClassifyMode::template_similarity;
  int k = 1;

  void validate() const {
    if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::invalid_input, "tau must lie in (0, 1)");
    if (k < 1) throw Error(ErrorCode::invalid_input, "k must be >= 1");
    descriptor_config.validate();
  }

  // Covers everything that changes learning outcomes. Classification mode
  // and k only affect read-only queries and are left out.
  std::string fingerprint() const {
    char tau_text[32];
    std::snprintf(tau_text, sizeof tau_text, "%.17g", tau);
    return config_fingerprint(descriptor, descriptor_config) + ";metric=" + to_string(metric.metric) +
           ";alignment=" + to_string(metric.alignment) + ";tau=" + tau_text +
           ";update=" + (update_templates ? "1" : "0");
  }

  std::uint64_t hash() const { return fnv1a(fingerprint()); }

  friend bool operator==(const LearnerConfig&, const LearnerConfig&) = default;
};

enum class DecisionKind { assigned, created };

inline const char* to_string(DecisionKind k) {
  return k == DecisionKind::assigned ? "assigned" : "created";
}

struct Decision {
  std::int64_t observation_id = 0;
  DecisionKind kind = DecisionKind::created;
  std::size_t category = 0;
  // Best similarity before any template was created; 0 for an empty library.
  double best_similarity = 0.0;
  Embedding embedding;
};

struct MemoryRecord {
  std::int64_t observation_id = 0;
  PointSet points{std::vector<Point2>{{0.0, 0.0}}};
  Descriptor descriptor;
  Embedding embedding;
  std::size_t category = 0;
  DecisionKind kind = DecisionKind::created;
  double best_similarity = 0.0;

  friend bool operator==(const MemoryRecord&, const MemoryRecord&) = default;
};

/// Append-only observation log with strictly increasing ids.
class Memory {
 public:
  void append(MemoryRecord r) {
    if (!records_.empty() && r.observation_id <= records_.back().observation_id) {
      throw Error(ErrorCode::invalid_input, "observation ids must increase");
    }
    records_.push_back(std::move(r));
  }
  const std::vector<MemoryRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  friend bool operator==(const Memory&, const Memory&) = default;

 private:
  std::vector<MemoryRecord> records_;
};

struct RankedCategory {
  std::size_t category = 0;
  double score = 0.0;
  friend bool operator==(const RankedCategory&, const RankedCategory&) = default;
};

/// The online learner. observe() is the only mutator; callers serialize it.
/// classify() and describe() are const and may run concurrently with each
/// other, never with observe().
class Learner {
 public:
  using LogSink = std::function<void(const std::string&)>;

  explicit Learner(LearnerConfig cfg)
      : cfg_(std::move(cfg)), library_(cfg_.descriptor, cfg_.descriptor_config, cfg_.metric) {
    cfg_.validate();
  }

  // Restores serialized state.
  Learner(LearnerConfig cfg, TemplateLibrary library, Memory memory, std::int64_t next_id)
      : cfg_(std::move(cfg)),
        library_(std::move(library)),
        memory_(std::move(memory)),
        next_id_(next_id) {
    cfg_.validate();
  }

  void set_log_sink(LogSink sink) { log_ = std::move(sink); }

  const LearnerConfig& config() const { return cfg_; }
  const TemplateLibrary& library() const { return library_; }
  const Memory& memory() const { return memory_; }
  std::int64_t next_observation_id() const { return next_id_; }
  std::size_t fallback_count() const { return fallbacks_; }

  Decision observe(const Polygon& obs) {
    const std::int64_t id = next_id_;
    Decision decision;
    decision.observation_id = id;
    try {
      const Polygon normalized = normalize_pose(obs);
      const Descriptor desc = library_.describe(normalized);
      const PointSet points(std::vector<Point2>(normalized.vertices().begin(),
                                                normalized.vertices().end()));
      const FallbackHook hook = counting_hook(id);

      std::size_t best = 0;
      if (!library_.empty()) {
        decision.embedding = embed(desc, library_, &hook);
        best = argmax(decision.embedding.values);
        decision.best_similarity = decision.embedding.values[best];
      }

      if (library_.empty() || decision.best_similarity < cfg_.tau) {
        const std::size_t tid = library_.size();
        library_.append(build_template(points, {id}, tid, cfg_.descriptor, cfg_.descriptor_config));
        decision.kind = DecisionKind::created;
        decision.category = tid;
        decision.embedding = embed(desc, library_, &hook);
      } else {
        decision.kind = DecisionKind::assigned;
        decision.category = best;
        if (cfg_.update_templates) {
          const Template& old = library_.at(best);
          std::vector<Point2> pooled(old.pooled.points().begin(), old.pooled.points().end());
          pooled.insert(pooled.end(), points.points().begin(), points.points().end());
          auto members = old.member_ids;
          members.push_back(id);
          library_.replace(build_template(PointSet(std::move(pooled)), std::move(members), best,
                                          cfg_.descriptor, cfg_.descriptor_config));
        }
      }

      memory_.append({id, points, desc, decision.embedding, decision.category, decision.kind,
                      decision.best_similarity});
    } catch (const Error& e) {
      if (e.observation_id()) throw;
      throw Error(e.code(), e.detail(), id);
    }
    ++next_id_;
    return decision;
  }

  /// Read-only template-space description of an observation.
  Embedding describe(const Polygon& obs) const {
    if (library_.empty()) throw Error(ErrorCode::empty_library, "no templates learned yet");
    const Descriptor desc = library_.describe(normalize_pose(obs));
    const FallbackHook hook = logging_hook();
    return embed(desc, library_, &hook);
  }

  /// Every category ranked best first.
  std::vector<RankedCategory> classify(const Polygon& obs) const {
    if (library_.empty()) throw Error(ErrorCode::cannot_classify, "no templates learned yet");
    const Embedding e = describe(obs);
    if (cfg_.classify_mode == ClassifyMode::template_similarity) return rank_by_similarity(e);
    return rank_by_neighbors(e);
  }

 private:
  static std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[best]) best = i;
    }
    return best;
  }

  FallbackHook counting_hook(std::int64_t obs_id) {
    return [this, obs_id](std::size_t tid, std::size_t layer) {
      ++fallbacks_;
      if (log_) {
        log_("observation " + std::to_string(obs_id) + ": zero-variance correlation against template " +
             std::to_string(tid) + " layer " + std::to_string(layer) + ", using euclidean");
      }
    };
  }

  FallbackHook logging_hook() const {
    return [this](std::size_t tid, std::size_t layer) {
      if (log_) {
        log_("zero-variance correlation against template " + std::to_string(tid) + " layer " +
             std::to_string(layer) + ", using euclidean");
      }
    };
  }

  static std::vector<RankedCategory> rank_by_similarity(const Embedding& e) {
    std::vector<RankedCategory> out;
    for (std::size_t i = 0; i < e.values.size(); ++i) out.push_back({i, e.values[i]});
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.score > b.score; });
    return out;
  }

  // k nearest memory records in template space. Older, shorter embeddings
  // are zero-padded. Majority vote; ties go to the category holding the
  // single nearest neighbour.
  std::vector<RankedCategory> rank_by_neighbors(const Embedding& e) const {
    if (memory_.empty()) throw Error(ErrorCode::cannot_classify, "memory is empty");
    struct Neighbor {
      double dist;
      std::int64_t id;
      std::size_t category;
    };
    std::vector<Neighbor> all;
    all.reserve(memory_.size());
    for (const auto& r : memory_.records()) {
      double acc = 0.0;
      for (std::size_t i = 0; i < e.values.size(); ++i) {
        const double other = i < r.embedding.values.size() ? r.embedding.values[i] : 0.0;
        acc += (e.values[i] - other) * (e.values[i] - other);
      }
      all.push_back({std::sqrt(acc), r.observation_id, r.category});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
    });
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg_.k), all.size());

    const std::size_t cats = library_.size();
    std::vector<std::size_t> votes(cats, 0);
    std::vector<std::size_t> first_rank(cats, all.size());
    for (std::size_t i = 0; i < k; ++i) {
      ++votes[all[i].category];
      first_rank[all[i].category] = std::min(first_rank[all[i].category], i);
    }
    std::vector<std::size_t> order(cats);
    for (std::size_t c = 0; c < cats; ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (votes[a] != votes[b]) return votes[a] > votes[b];
      return first_rank[a] < first_rank[b];
    });
    std::vector<RankedCategory> out;
    for (auto c : order) out.push_back({c, static_cast<double>(votes[c]) / static_cast<double>(k)});
    return out;
  }

  LearnerConfig cfg_;
  TemplateLibrary library_;
  Memory memory_;
  std::int64_t next_id_ = 0;
  std::size_t fallbacks_ = 0;
  LogSink log_;
};

}  // namespace shapelearn
