#pragma once

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "case.hpp"
#include "config.hpp"
#include "core.hpp"
#include "geom.hpp"
#include "imaging.hpp"
#include "pipeline.hpp"

namespace declump::io {

namespace fs = std::filesystem;

/// A decoded portable graymap: raw samples and the declared maximum.
struct Graymap {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> samples;
};

namespace detail {

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

// Header token reader that skips whitespace and '#' comments.
struct HeaderReader {
  const std::string& data;
  std::size_t pos = 0;

  long next_int() {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) ++pos;
    if (start == pos) throw Error(ErrorCode::ParseError, "malformed graymap header");
    return std::stol(data.substr(start, pos - start));
  }
};

inline std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.000" || s == "-0.00" || s == "-0") s.erase(0, 1);
  return s;
}

}  // namespace detail

inline Graymap read_pgm(const fs::path& path) {
  const std::string data = detail::read_file(path);
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5')) {
    throw Error(ErrorCode::ParseError, path.string() + " is not a P2/P5 graymap");
  }
  const bool binary = data[1] == '5';
  detail::HeaderReader hr{data, 2};
  Graymap g;
  g.width = static_cast<int>(hr.next_int());
  g.height = static_cast<int>(hr.next_int());
  g.maxval = static_cast<int>(hr.next_int());
  if (g.width <= 0 || g.height <= 0 || g.maxval <= 0 || g.maxval > 65535) {
    throw Error(ErrorCode::ParseError, path.string() + ": bad graymap dimensions");
  }
  const std::size_t n = static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height);
  g.samples.resize(n);
  if (binary) {
    std::size_t pos = hr.pos + 1;  // single whitespace after maxval
    const std::size_t bytes = g.maxval > 255 ? 2 : 1;
    if (data.size() < pos + n * bytes) throw Error(ErrorCode::ParseError, path.string() + ": truncated raster");
    for (std::size_t k = 0; k < n; ++k) {
      const auto hi = static_cast<unsigned char>(data[pos + k * bytes]);
      g.samples[k] = bytes == 2 ? static_cast<std::uint16_t>((hi << 8) | static_cast<unsigned char>(data[pos + 2 * k + 1])) : hi;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) g.samples[k] = static_cast<std::uint16_t>(hr.next_int());
  }
  for (auto s : g.samples) {
    if (s > g.maxval) throw Error(ErrorCode::ParseError, path.string() + ": sample exceeds maxval");
  }
  return g;
}

/// Binary graymap; 16-bit big-endian samples when maxval exceeds 255.
inline std::string encode_pgm(const Graymap& g) {
  std::string out = "P5\n" + std::to_string(g.width) + " " + std::to_string(g.height) + "\n" + std::to_string(g.maxval) + "\n";
  const bool wide = g.maxval > 255;
  for (auto s : g.samples) {
    if (wide) out.push_back(static_cast<char>(s >> 8));
    out.push_back(static_cast<char>(s & 0xff));
  }
  return out;
}

inline void write_pgm(const fs::path& path, const Graymap& g) { detail::write_file(path, encode_pgm(g)); }

/// Intensities scaled to [0, 1] by the declared maximum.
inline ScalarField read_intensity(const fs::path& path) {
  const Graymap g = read_pgm(path);
  ScalarField f(g.width, g.height, 0.0, FieldKind::Intensity);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      f(x, y) = g.samples[static_cast<std::size_t>(y) * g.width + x] / static_cast<double>(g.maxval);
    }
  }
  return f;
}

inline void write_intensity(const fs::path& path, const ScalarField& f) {
  Graymap g{f.width(), f.height(), 255, {}};
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      g.samples.push_back(static_cast<std::uint16_t>(std::lround(std::clamp(f(x, y), 0.0, 1.0) * 255.0)));
    }
  }
  write_pgm(path, g);
}

inline LabelImage read_labels(const fs::path& path) {
  const Graymap g = read_pgm(path);
  LabelImage out(g.width, g.height, 0);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) out(x, y) = g.samples[static_cast<std::size_t>(y) * g.width + x];
  }
  return out;
}

/// Labels as a 16-bit graymap (maxval 65535 regardless of content).
inline std::string encode_labels(const LabelImage& labels) {
  Graymap g{labels.width(), labels.height(), 65535, {}};
  for (std::int32_t v : labels.values()) {
    if (v < 0 || v > 65535) throw Error(ErrorCode::IoError, "label out of 16-bit range");
    g.samples.push_back(static_cast<std::uint16_t>(v));
  }
  return encode_pgm(g);
}

inline void write_labels(const fs::path& path, const LabelImage& labels) { detail::write_file(path, encode_labels(labels)); }

// ---------------------------------------------------------------------------
// Structured text

inline std::vector<Vec2> parse_points(const YAML::Node& root, const std::string& key, const std::string& where) {
  if (!root.IsMap() || !root[key]) throw Error(ErrorCode::ParseError, where + ": missing '" + key + "'");
  const YAML::Node list = root[key];
  if (!list.IsSequence()) throw Error(ErrorCode::ParseError, where + ": '" + key + "' must be a list");
  std::vector<Vec2> out;
  try {
    for (const auto& item : list) {
      if (!item.IsSequence() || item.size() != 2) throw Error(ErrorCode::ParseError, where + ": points must be [x, y]");
      out.push_back({item[0].as<double>(), item[1].as<double>()});
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
  return out;
}

inline YAML::Node load_yaml(const fs::path& path) {
  try {
    return YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

inline std::vector<Vec2> read_points(const fs::path& path, const std::string& key) {
  return parse_points(load_yaml(path), key, path.string());
}

inline std::string encode_points(std::span<const Vec2> points, const std::string& key) {
  std::string out = key + ":\n";
  for (const Vec2& p : points) out += "  - [" + detail::fixed(p.x, 4) + ", " + detail::fixed(p.y, 4) + "]\n";
  if (points.empty()) out = key + ": []\n";
  return out;
}

inline void write_points(const fs::path& path, std::span<const Vec2> points, const std::string& key) {
  detail::write_file(path, encode_points(points, key));
}

/// Flat key/value document; keys mirror the Config field names.
inline Config parse_config(const YAML::Node& root, const std::string& where = "config") {
  Config c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) throw Error(ErrorCode::InvalidConfig, where + ": expected a key/value map");
  const std::map<std::string, double*> reals{
      {"R_max", &c.R_max},
      {"theta_min", &c.theta_min},
      {"Theta_min", &c.Theta_min},
      {"Theta_max", &c.Theta_max},
      {"neighborhood_radius", &c.neighborhood_radius},
      {"negative_curvature_factor", &c.negative_curvature_factor},
      {"blur_sigma", &c.blur_sigma},
      {"closing_radius", &c.closing_radius},
      {"curvature_window", &c.curvature_window},
      {"curvature_smooth_sigma", &c.curvature_smooth_sigma},
      {"normal_smooth_sigma", &c.normal_smooth_sigma},
      {"min_arc_to_chord", &c.min_arc_to_chord},
      {"iou_threshold", &c.iou_threshold},
  };
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    try {
      if (auto it = reals.find(key); it != reals.end()) {
        *it->second = kv.second.as<double>();
      } else if (key == "min_region_area") {
        c.min_region_area = kv.second.as<int>();
      } else if (key == "min_piece_vertices") {
        c.min_piece_vertices = kv.second.as<int>();
      } else {
        throw Error(ErrorCode::InvalidConfig, where + ": unknown key '" + key + "'");
      }
    } catch (const YAML::Exception&) {
      throw Error(ErrorCode::InvalidConfig, where + ": bad value for '" + key + "'");
    }
  }
  validate(c);
  return c;
}

inline Config read_config(const fs::path& path) {
  try {
    return parse_config(load_yaml(path), path.string());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw Error(ErrorCode::InvalidConfig, e.what());
    throw;
  }
}

// ---------------------------------------------------------------------------
// Result documents

inline nlohmann::ordered_json vote_json(const CompetingPair& pair) {
  nlohmann::ordered_json categories = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < 4; ++k) {
    const int o = pair.vote.outcome[k];
    categories.push_back({{"category", kCategoryNames[k]},
                          {"used", static_cast<bool>(pair.used[k])},
                          {"vertex_vertex", pair.vv_scores[k]},
                          {"vertex_center", pair.vc_scores[k]},
                          {"outcome", o < 0 ? "skipped" : o == 0 ? "tie" : o == 1 ? "vertex-vertex" : "vertex-center"}});
  }
  return {{"group", pair.group},
          {"categories", categories},
          {"vertex_vertex_wins", pair.vote.vv_wins},
          {"vertex_center_wins", pair.vote.vc_wins},
          {"decided_by_total", pair.vote.decided_by_total},
          {"winner", to_string(pair.vote.winner)}};
}

inline nlohmann::ordered_json cuts_json(const PartitionResult& r) {
  nlohmann::ordered_json cuts = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.cuts.size(); ++k) {
    const Cut& c = r.cuts[k];
    nlohmann::ordered_json j{{"kind", to_string(c.kind)},
                             {"a", {c.a.x, c.a.y}},
                             {"b", {c.b.x, c.b.y}},
                             {"boundary_indices", c.boundary_indices()},
                             {"owner", c.owner}};
    const int p = r.cut_pair[k];
    j["vote"] = p >= 0 ? vote_json(r.pairs[static_cast<std::size_t>(p)]) : nlohmann::ordered_json(nullptr);
    cuts.push_back(std::move(j));
  }
  nlohmann::ordered_json added = nlohmann::ordered_json::array();
  for (const Vec2& v : r.added_vertices) added.push_back({v.x, v.y});
  nlohmann::ordered_json votes = nlohmann::ordered_json::array();
  for (const auto& p : r.pairs) votes.push_back(vote_json(p));
  const Diagnostics& d = r.diagnostics;
  return {{"cuts", cuts},
          {"added_vertices", added},
          {"votes", votes},
          {"region_count", r.region_count},
          {"seed_region", r.seed_region},
          {"diagnostics",
           {{"unassigned_vertices", d.unassigned_vertices},
            {"assignment_iterations", d.assignment_iterations},
            {"dropped_pieces", d.dropped_pieces},
            {"discarded_vertex_vertex_cuts", d.discarded_vv_cuts},
            {"triangles", d.triangles},
            {"valid_triangles", d.valid_triangles},
            {"degenerate_groups", d.degenerate_groups},
            {"crossing_cuts_removed", d.crossing_cuts_removed},
            {"merged_regions", d.merged_regions},
            {"samples_clamped", d.samples_clamped}}}};
}

/// Overlay with the boundary in black, vertex-vertex and vertex-center cuts
/// in separate stroke classes and seeds as dots. Coordinates are printed with
/// fixed precision so identical inputs give identical bytes.
inline std::string render_svg(const ClosedBoundary& boundary, const PartitionResult& r, std::span<const Vec2> seeds, int width,
                              int height) {
  using detail::fixed;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"-0.5 -0.5 "
    << width << " " << height << "\">\n";
  s << "<style>.boundary{fill:none;stroke:#000;stroke-width:0.6}.vv{stroke:#d62728;stroke-width:0.8}"
       ".vc{stroke:#1f77b4;stroke-width:0.8}.seed{fill:#2ca02c}.added{fill:#1f77b4}</style>\n";
  s << "<polygon class=\"boundary\" points=\"";
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (i) s << ' ';
    s << fixed(boundary.vertices[i].x, 2) << ',' << fixed(boundary.vertices[i].y, 2);
  }
  s << "\"/>\n";
  for (const Cut& c : r.cuts) {
    s << "<line class=\"" << (c.kind == CutKind::VertexVertex ? "vv" : "vc") << "\" x1=\"" << fixed(c.a.x, 2) << "\" y1=\""
      << fixed(c.a.y, 2) << "\" x2=\"" << fixed(c.b.x, 2) << "\" y2=\"" << fixed(c.b.y, 2) << "\"/>\n";
  }
  for (const Vec2& v : r.added_vertices) {
    s << "<circle class=\"added\" cx=\"" << fixed(v.x, 2) << "\" cy=\"" << fixed(v.y, 2) << "\" r=\"1\"/>\n";
  }
  for (const Vec2& p : seeds) {
    s << "<circle class=\"seed\" cx=\"" << fixed(p.x, 2) << "\" cy=\"" << fixed(p.y, 2) << "\" r=\"1.2\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// Case directories
//
// <dir>/boundary.yaml | <dir>/mask.pgm   boundary source
// <dir>/seeds.yaml                       seeds
// <dir>/image.pgm                        optional intensity image
// <dir>/truth.pgm                        optional ground-truth labels
// <dir>/case.yaml                        optional {id, label}

inline ClumpCase load_case(const fs::path& dir) {
  ClumpCase c;
  c.id = dir.filename().string();
  if (fs::exists(dir / "case.yaml")) {
    const YAML::Node meta = load_yaml(dir / "case.yaml");
    try {
      if (meta["id"]) c.id = meta["id"].as<std::string>();
      if (meta["label"]) c.label = meta["label"].as<std::int32_t>();
    } catch (const YAML::Exception& e) {
      throw Error(ErrorCode::ParseError, (dir / "case.yaml").string() + ": " + e.what());
    }
  }
  if (fs::exists(dir / "boundary.yaml")) {
    c.polygon = read_points(dir / "boundary.yaml", "vertices");
  } else if (fs::exists(dir / "mask.pgm")) {
    c.mask = read_labels(dir / "mask.pgm");
  } else {
    throw Error(ErrorCode::IoError, dir.string() + ": neither boundary.yaml nor mask.pgm present");
  }
  c.seeds = read_points(dir / "seeds.yaml", "seeds");
  if (fs::exists(dir / "image.pgm")) c.image = read_intensity(dir / "image.pgm");
  if (fs::exists(dir / "truth.pgm")) c.truth = read_labels(dir / "truth.pgm");
  return c;
}

inline void save_case(const fs::path& dir, const ClumpCase& c) {
  fs::create_directories(dir);
  detail::write_file(dir / "case.yaml", "id: " + c.id + "\nlabel: " + std::to_string(c.label) + "\n");
  if (c.polygon) {
    write_points(dir / "boundary.yaml", *c.polygon, "vertices");
  } else {
    write_labels(dir / "mask.pgm", c.mask);
  }
  write_points(dir / "seeds.yaml", c.seeds, "seeds");
  if (c.image) write_intensity(dir / "image.pgm", *c.image);
  if (c.truth) write_labels(dir / "truth.pgm", *c.truth);
}

/// Immediate subdirectories holding a seeds file, sorted by name.
inline std::vector<fs::path> list_case_dirs(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::IoError, root.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && fs::exists(e.path() / "seeds.yaml")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace declump::io
