// Command-line driver: generate datasets, learn templates, classify, evaluate
// and export template drawings.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapelearn/harness/dataset.hpp"
#include "shapelearn/harness/eval.hpp"
#include "shapelearn/harness/state.hpp"
#include "shapelearn/harness/svg.hpp"
#include "shapelearn/shapelearn.hpp"

namespace sl = shapelearn;
namespace h = shapelearn::harness;

namespace {

struct ConfigFlags {
  double tau = 0.8;
  std::string metric = "euclidean";
  std::string descriptor = "geometric";
  std::string alignment = "shift";
  std::string classify_mode = "template";
  int k = 1;
  bool update_templates = false;

  sl::LearnerConfig build() const {
    sl::LearnerConfig c;
    c.tau = tau;
    c.metric.metric = h::detail::parse_metric(metric);
    c.metric.alignment = h::detail::parse_alignment(alignment);
    c.descriptor = h::detail::parse_descriptor_kind(descriptor);
    c.classify_mode = h::detail::parse_classify_mode(classify_mode);
    c.k = k;
    c.update_templates = update_templates;
    c.validate();
    return c;
  }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--tau", f.tau, "Similarity threshold for joining a category")->capture_default_str();
  cmd->add_option("--metric", f.metric, "euclidean | correlation")
      ->check(CLI::IsMember({"euclidean", "correlation"}))
      ->capture_default_str();
  cmd->add_option("--descriptor", f.descriptor, "geometric | visual")
      ->check(CLI::IsMember({"geometric", "visual"}))
      ->capture_default_str();
  cmd->add_option("--alignment", f.alignment, "none | shift")
      ->check(CLI::IsMember({"none", "shift"}))
      ->capture_default_str();
  cmd->add_option("--classify-mode", f.classify_mode, "template | knn")
      ->check(CLI::IsMember({"template", "knn"}))
      ->capture_default_str();
  cmd->add_option("--k", f.k, "Neighbours for knn classification")->capture_default_str();
  cmd->add_flag("--update-templates", f.update_templates,
                "Rebuild a matched template with each newly assigned member");
}

std::vector<h::DatasetRecord> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sl::Error(sl::ErrorCode::io_error, "cannot open " + path);
  return h::read_dataset(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sl::Error(sl::ErrorCode::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sl::Error(sl::ErrorCode::io_error, "cannot write " + path);
  out << text;
  if (!out) throw sl::Error(sl::ErrorCode::io_error, "write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online template learning over polygon observations"};
  app.require_subcommand(1);

  // generate
  std::string families = "triangle,square,hexagon";
  int per_family = 10;
  double jitter = 0.02;
  std::uint64_t seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic labelled polygon dataset");
  gen->add_option("--families", families, "Comma-separated family names")->capture_default_str();
  gen->add_option("--per-family", per_family, "Observations per family")->capture_default_str();
  gen->add_option("--jitter", jitter, "Vertex noise, fraction of circumradius")->capture_default_str();
  gen->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Dataset path")->required();

  // learn
  ConfigFlags learn_cfg;
  std::string learn_data, learn_out, learn_log;
  auto* learn = app.add_subcommand("learn", "Stream a dataset through a fresh learner");
  learn->add_option("--data", learn_data, "Dataset path")->required();
  learn->add_option("--out", learn_out, "State file to write")->required();
  learn->add_option("--log", learn_log, "Decision log path (default: stdout)");
  learn->add_option("--seed", seed, "Accepted for symmetry; learning is deterministic");
  add_config_flags(learn, learn_cfg);

  // classify
  std::string cls_state, cls_data, cls_out, cls_mode;
  int cls_k = 0;
  auto* classify = app.add_subcommand("classify", "Rank learned categories for each record");
  classify->add_option("--state", cls_state, "Learned state file")->required();
  classify->add_option("--data", cls_data, "Dataset path")->required();
  classify->add_option("--out", cls_out, "Output path (default: stdout)");
  classify->add_option("--classify-mode", cls_mode, "Override: template | knn")
      ->check(CLI::IsMember({"template", "knn"}));
  classify->add_option("--k", cls_k, "Override knn neighbour count");

  // eval
  ConfigFlags eval_cfg;
  std::string eval_data, eval_state, eval_test, eval_out;
  bool eval_sweep = false;
  bool eval_calibrate = false;
  auto* eval = app.add_subcommand("eval", "Score learned categories against labels");
  eval->add_option("--data", eval_data, "Labelled dataset (training stream)")->required();
  eval->add_option("--state", eval_state, "Classify --data against this state instead of learning");
  eval->add_option("--test", eval_test, "Held-out labelled dataset to classify after learning");
  eval->add_flag("--sweep", eval_sweep, "Run the tau x metric x descriptor grid");
  eval->add_flag("--calibrate", eval_calibrate, "Choose tau from the grid by template count first");
  eval->add_option("--out", eval_out, "Machine-readable JSON report path");
  add_config_flags(eval, eval_cfg);

  // export-svg
  std::string svg_state, svg_out;
  std::size_t svg_id = 0;
  auto* svg = app.add_subcommand("export-svg", "Draw a template's convex layers");
  svg->add_option("--state", svg_state, "Learned state file")->required();
  svg->add_option("--template", svg_id, "Template id")->required();
  svg->add_option("--out", svg_out, "SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      h::GenerateOptions opt;
      std::stringstream ss(families);
      for (std::string f; std::getline(ss, f, ',');) {
        if (!f.empty()) opt.families.push_back(f);
      }
      opt.per_family = per_family;
      opt.jitter = jitter;
      opt.seed = seed;
      std::ostringstream out;
      h::write_dataset(out, h::generate_dataset(opt));
      write_file(gen_out, out.str());
    } else if (*learn) {
      const auto records = load_dataset(learn_data);
      const auto cfg = learn_cfg.build();
      if (records.empty()) std::cerr << "no observations in " << learn_data << "\n";
      auto run = h::learn(records, cfg);
      write_file(learn_out, h::serialize_state(run.learner));
      const std::string log = h::decision_log(run);
      if (learn_log.empty()) {
        std::cout << log;
      } else {
        write_file(learn_log, log);
      }
      std::cerr << records.size() << " observations, " << run.learner.library().size()
                << " templates\n";
    } else if (*classify) {
      sl::Learner learner = h::deserialize_state(slurp(cls_state));
      if (!cls_mode.empty() || cls_k > 0) {
        auto cfg = learner.config();
        if (!cls_mode.empty()) cfg.classify_mode = h::detail::parse_classify_mode(cls_mode);
        if (cls_k > 0) cfg.k = cls_k;
        learner = sl::Learner(cfg, learner.library(), learner.memory(), learner.next_observation_id());
      }
      std::string text;
      for (const auto& r : load_dataset(cls_data)) {
        h::ojson j;
        j["id"] = r.id;
        auto ranking = h::ojson::array();
        for (const auto& rc : learner.classify(r.polygon())) ranking.push_back({rc.category, rc.score});
        j["ranking"] = std::move(ranking);
        text += j.dump() + "\n";
      }
      if (cls_out.empty()) {
        std::cout << text;
      } else {
        write_file(cls_out, text);
      }
    } else if (*eval) {
      const auto train = load_dataset(eval_data);
      std::optional<std::vector<h::DatasetRecord>> test;
      if (!eval_test.empty()) test = load_dataset(eval_test);
      auto cfg = eval_cfg.build();
      h::ojson doc;
      if (eval_sweep) {
        auto cells = h::sweep(train, test, cfg);
        auto arr = h::ojson::array();
        for (const auto& c : cells) {
          std::cout << h::report_text(c.report) << '\n';
          arr.push_back(h::report_json(c.report));
        }
        doc["sweep"] = std::move(arr);
      } else {
        if (eval_calibrate) {
          cfg.tau = h::calibrate_tau(train, cfg);
          std::cout << "calibrated tau " << cfg.tau << '\n';
        }
        h::EvalReport rep;
        if (!eval_state.empty()) {
          const sl::Learner learner = h::deserialize_state(slurp(eval_state));
          rep = h::evaluate_classify(learner, train);
        } else if (test) {
          const auto run = h::learn(train, cfg);
          rep = h::evaluate_classify(run.learner, *test);
        } else {
          rep = h::evaluate_fresh(train, cfg);
        }
        std::cout << h::report_text(rep);
        doc = h::report_json(rep);
      }
      if (!eval_out.empty()) write_file(eval_out, doc.dump(1) + "\n");
    } else if (*svg) {
      const sl::Learner learner = h::deserialize_state(slurp(svg_state));
      write_file(svg_out, h::render_template_svg(learner.library().at(svg_id)));
    }
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
