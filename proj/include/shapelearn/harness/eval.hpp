#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapelearn/error.hpp"
#include "shapelearn/harness/dataset.hpp"
#include "shapelearn/harness/state.hpp"
#include "shapelearn/learner.hpp"

namespace shapelearn::harness {

/// Maximum-weight one-to-one assignment of rows to columns (Kuhn-Munkres,
/// O(n^3)). Returns, per row, the matched column or -1 when the row is left
/// unmatched because there are more rows than columns.
inline std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const std::size_t rows = weight.size();
  const std::size_t cols = rows == 0 ? 0 : weight[0].size();
  const std::size_t n = std::max(rows, cols);
  if (n == 0) return {};

  double wmax = 0.0;
  for (const auto& r : weight) {
    for (double w : r) wmax = std::max(wmax, w);
  }
  // Square cost matrix, 1-based; padding cells cost as much as a zero weight.
  auto cost = [&](std::size_t i, std::size_t j) {
    const double w = (i <= rows && j <= cols) ? weight[i - 1][j - 1] : 0.0;
    return wmax - w;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> match(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] >= 1 && p[j] <= rows && j <= cols) match[p[j] - 1] = static_cast<int>(j - 1);
  }
  return match;
}

struct EvalReport {
  double accuracy = 0.0;
  double majority_baseline = 0.0;
  std::vector<std::string> labels;                 // sorted
  std::size_t categories = 0;
  std::vector<std::vector<std::size_t>> confusion;  // label x category
  std::vector<int> label_to_category;               // Hungarian match, -1 if none
  std::vector<std::pair<std::size_t, std::size_t>> template_count_curve;
  LearnerConfig config;
};

/// Confusion matrix and Hungarian-matched accuracy of discovered categories
/// against ground-truth labels.
inline EvalReport score(const std::vector<std::string>& truth, const std::vector<std::size_t>& predicted,
                        std::size_t categories) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::invalid_input, "label and prediction counts differ");
  }
  EvalReport rep;
  rep.categories = categories;
  std::map<std::string, std::size_t> index;
  for (const auto& l : truth) index.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [label, idx] : index) {
    idx = next++;
    rep.labels.push_back(label);
  }
  rep.confusion.assign(rep.labels.size(), std::vector<std::size_t>(categories, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] >= categories) throw Error(ErrorCode::invalid_input, "category out of range");
    ++rep.confusion[index[truth[i]]][predicted[i]];
  }

  std::vector<std::vector<double>> weight(rep.labels.size(), std::vector<double>(categories));
  std::size_t majority = 0;
  for (std::size_t r = 0; r < rep.labels.size(); ++r) {
    std::size_t row_total = 0;
    for (std::size_t c = 0; c < categories; ++c) {
      weight[r][c] = static_cast<double>(rep.confusion[r][c]);
      row_total += rep.confusion[r][c];
    }
    majority = std::max(majority, row_total);
  }
  rep.label_to_category = max_weight_assignment(weight);
  std::size_t matched = 0;
  for (std::size_t r = 0; r < rep.labels.size(); ++r) {
    if (rep.label_to_category[r] >= 0) {
      matched += rep.confusion[r][static_cast<std::size_t>(rep.label_to_category[r])];
    }
  }
  const double n = static_cast<double>(truth.size());
  rep.accuracy = truth.empty() ? 1.0 : static_cast<double>(matched) / n;
  rep.majority_baseline = truth.empty() ? 1.0 : static_cast<double>(majority) / n;
  return rep;
}

inline std::vector<std::string> require_labels(const std::vector<DatasetRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (!r.label || r.label->empty()) {
      throw Error(ErrorCode::eval_requires_labels,
                  "record " + std::to_string(r.id) + " has no label");
    }
    out.push_back(*r.label);
  }
  return out;
}

struct LearnOutcome {
  Learner learner;
  std::vector<Decision> decisions;
  std::vector<std::int64_t> record_ids;  // dataset id per decision
};

/// Streams records in order through a fresh learner.
inline LearnOutcome learn(const std::vector<DatasetRecord>& records, const LearnerConfig& cfg) {
  LearnOutcome out{Learner(cfg), {}, {}};
  for (const auto& r : records) {
    out.decisions.push_back(out.learner.observe(r.polygon()));
    out.record_ids.push_back(r.id);
  }
  return out;
}

/// One JSON object per observation: dataset id, decision kind, category and
/// best pre-decision similarity.
inline std::string decision_log(const LearnOutcome& run) {
  std::string out;
  for (std::size_t i = 0; i < run.decisions.size(); ++i) {
    const auto& d = run.decisions[i];
    ojson j;
    j["id"] = run.record_ids[i];
    j["observation"] = d.observation_id;
    j["kind"] = to_string(d.kind);
    j["category"] = d.category;
    j["best_similarity"] = d.best_similarity;
    out += j.dump() + "\n";
  }
  return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> template_count_curve(const Memory& memory) {
  std::vector<std::pair<std::size_t, std::size_t>> curve;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    curve.emplace_back(i, memory.records()[i].embedding.values.size());
  }
  return curve;
}

/// Learns the labelled dataset from scratch and scores the categories the
/// learner assigned along the way.
inline EvalReport evaluate_fresh(const std::vector<DatasetRecord>& records, const LearnerConfig& cfg) {
  const auto truth = require_labels(records);
  const LearnOutcome run = learn(records, cfg);
  std::vector<std::size_t> predicted;
  for (const auto& d : run.decisions) predicted.push_back(d.category);
  EvalReport rep = score(truth, predicted, run.learner.library().size());
  rep.template_count_curve = template_count_curve(run.learner.memory());
  rep.config = cfg;
  return rep;
}

/// Classifies the labelled dataset against an already-trained learner.
inline EvalReport evaluate_classify(const Learner& learner, const std::vector<DatasetRecord>& records) {
  const auto truth = require_labels(records);
  std::vector<std::size_t> predicted;
  for (const auto& r : records) predicted.push_back(learner.classify(r.polygon()).front().category);
  EvalReport rep = score(truth, predicted, learner.library().size());
  rep.template_count_curve = template_count_curve(learner.memory());
  rep.config = learner.config();
  return rep;
}

inline const std::vector<double>& sweep_taus() {
  static const std::vector<double> taus{0.5, 0.6, 0.7, 0.8, 0.9};
  return taus;
}

struct SweepCell {
  LearnerConfig config;
  EvalReport report;
  std::size_t templates = 0;
};

/// Every (metric, descriptor, tau) grid cell: 2 x 2 x 5 = 20 reports. Each
/// cell learns `train` from scratch; with `test`, the report scores held-out
/// classification instead of the training assignments.
inline std::vector<SweepCell> sweep(const std::vector<DatasetRecord>& train,
                                    const std::optional<std::vector<DatasetRecord>>& test,
                                    const LearnerConfig& base) {
  require_labels(train);
  if (test) require_labels(*test);
  std::vector<SweepCell> cells;
  for (Metric m : {Metric::euclidean, Metric::correlation}) {
    for (DescriptorKind k : {DescriptorKind::geometric, DescriptorKind::visual}) {
      for (double tau : sweep_taus()) {
        LearnerConfig cfg = base;
        cfg.metric.metric = m;
        cfg.descriptor = k;
        cfg.tau = tau;
        SweepCell cell{cfg, {}, 0};
        if (test) {
          const LearnOutcome run = learn(train, cfg);
          cell.report = evaluate_classify(run.learner, *test);
          cell.templates = run.learner.library().size();
        } else {
          cell.report = evaluate_fresh(train, cfg);
          cell.templates = cell.report.categories;
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

/// Picks tau from the sweep grid whose learned template count is closest to
/// the number of distinct labels; ties prefer higher training accuracy, then
/// the smaller tau.
inline double calibrate_tau(const std::vector<DatasetRecord>& train, const LearnerConfig& base) {
  const auto truth = require_labels(train);
  std::vector<std::string> distinct = truth;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  double best_tau = sweep_taus().front();
  std::size_t best_gap = std::numeric_limits<std::size_t>::max();
  double best_acc = -1.0;
  for (double tau : sweep_taus()) {
    LearnerConfig cfg = base;
    cfg.tau = tau;
    const EvalReport rep = evaluate_fresh(train, cfg);
    const std::size_t t = rep.categories;
    const std::size_t gap = t > distinct.size() ? t - distinct.size() : distinct.size() - t;
    if (gap < best_gap || (gap == best_gap && rep.accuracy > best_acc)) {
      best_tau = tau;
      best_gap = gap;
      best_acc = rep.accuracy;
    }
  }
  return best_tau;
}

inline ojson report_json(const EvalReport& rep) {
  ojson j;
  j["accuracy"] = rep.accuracy;
  j["majority_baseline"] = rep.majority_baseline;
  j["labels"] = rep.labels;
  j["categories"] = rep.categories;
  j["confusion"] = rep.confusion;
  j["label_to_category"] = rep.label_to_category;
  auto curve = ojson::array();
  for (const auto& [i, n] : rep.template_count_curve) curve.push_back({i, n});
  j["template_count_curve"] = std::move(curve);
  j["config"] = detail::config_json(rep.config);
  return j;
}

inline std::string report_text(const EvalReport& rep) {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof buf, "accuracy %.4f (majority baseline %.4f), %zu categories\n",
                rep.accuracy, rep.majority_baseline, rep.categories);
  os << buf;
  os << "config: tau=" << rep.config.tau << " descriptor=" << to_string(rep.config.descriptor)
     << " metric=" << to_string(rep.config.metric.metric)
     << " alignment=" << to_string(rep.config.metric.alignment) << '\n';
  os << "confusion (rows: labels, columns: categories)\n";
  for (std::size_t r = 0; r < rep.labels.size(); ++r) {
    os << "  " << rep.labels[r] << ':';
    for (auto c : rep.confusion[r]) os << ' ' << c;
    os << '\n';
  }
  return os.str();
}

}  // namespace shapelearn::harness
