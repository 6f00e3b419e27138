#pragma once

#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapelearn/error.hpp"
#include "shapelearn/geometry.hpp"
#include "shapelearn/polygon_gen.hpp"
#include "shapelearn/random.hpp"

namespace shapelearn::harness {

/// One observation in a line-delimited dataset file:
/// {"id":0,"label":"triangle","vertices":[[x,y],...]}
/// The label is ground truth for evaluation only and may be absent.
struct DatasetRecord {
  std::int64_t id = 0;
  std::optional<std::string> label;
  std::vector<Point2> vertices;

  Polygon polygon() const { return Polygon::make(vertices); }

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

inline std::string to_json_line(const DatasetRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  if (r.label) j["label"] = *r.label;
  auto verts = nlohmann::ordered_json::array();
  for (const auto& p : r.vertices) verts.push_back({p.x, p.y});
  j["vertices"] = std::move(verts);
  return j.dump();
}

inline DatasetRecord parse_record(const std::string& line, std::size_t line_no) {
  const auto fail = [line_no](const std::string& what) {
    return Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + what);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw fail("record must be an object");
  if (!j.contains("id") || !j["id"].is_number_integer()) throw fail("missing integer \"id\"");
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw fail("missing \"vertices\" array");

  DatasetRecord r;
  r.id = j["id"].get<std::int64_t>();
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw fail("\"label\" must be a string");
    r.label = j["label"].get<std::string>();
  }
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw fail("each vertex must be [x, y]");
    }
    r.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  try {
    r.polygon();
  } catch (const Error& e) {
    throw fail("invalid polygon: " + e.detail());
  }
  return r;
}

/// Reads every non-blank line. The first malformed record aborts with its
/// 1-based line number.
inline std::vector<DatasetRecord> read_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::set<std::int64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto r = parse_record(line, line_no);
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": duplicate id " + std::to_string(r.id));
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

struct FamilyShape {
  std::string name;
  int sides = 3;
};

/// Known family names: triangle, square, pentagon, hexagon, heptagon,
/// octagon, or "ngon<k>" for any k >= 3.
inline FamilyShape parse_family(const std::string& name) {
  static const std::pair<const char*, int> named[] = {{"triangle", 3}, {"square", 4},
                                                      {"pentagon", 5}, {"hexagon", 6},
                                                      {"heptagon", 7}, {"octagon", 8}};
  for (const auto& [n, k] : named) {
    if (name == n) return {name, k};
  }
  if (name.rfind("ngon", 0) == 0 && name.size() > 4) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(name.substr(4), &used);
      if (used == name.size() - 4 && k >= 3) return {name, k};
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::invalid_input, "unknown polygon family '" + name + "'");
}

struct GenerateOptions {
  std::vector<std::string> families;
  int per_family = 10;
  double jitter = 0.02;
  std::uint64_t seed = 0;
};

/// Perturbed n-gons, one family per label, each under a random rotation,
/// scale in [0.5, 2] and translation in [-10, 10]^2. Records are shuffled
/// and then numbered in file order.
inline std::vector<DatasetRecord> generate_dataset(const GenerateOptions& opt) {
  if (opt.per_family < 0) throw Error(ErrorCode::invalid_input, "per-family count is negative");
  std::vector<DatasetRecord> out;
  std::uint64_t stream = 0;
  for (const auto& name : opt.families) {
    const FamilyShape fam = parse_family(name);
    for (int i = 0; i < opt.per_family; ++i, ++stream) {
      Rng pose(mix_seed(opt.seed, 2 * stream));
      PolygonSpec spec;
      spec.family = PolygonFamily::perturbed;
      spec.n = fam.sides;
      spec.jitter = opt.jitter;
      spec.rotation = pose.uniform(0.0, 2.0 * std::numbers::pi);
      spec.scale = pose.uniform(0.5, 2.0);
      spec.seed = mix_seed(opt.seed, 2 * stream + 1);
      const Point2 shift{pose.uniform(-10.0, 10.0), pose.uniform(-10.0, 10.0)};
      Polygon poly = [&] {
        try {
          return generate_polygon(spec);
        } catch (const Error& e) {
          throw Error(e.code(), "family " + name + ": " + e.detail());
        }
      }();
      DatasetRecord r;
      r.label = fam.name;
      for (const auto& p : poly.vertices()) r.vertices.push_back(p + shift);
      out.push_back(std::move(r));
    }
  }
  Rng order(mix_seed(opt.seed, ~std::uint64_t{0}));
  order.shuffle(out.begin(), out.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<std::int64_t>(i);
  return out;
}

}  // namespace shapelearn::harness
