// Copyright 2026 The Roadsafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROADSAFE_INGEST_HPP_
#define ROADSAFE_INGEST_HPP_

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadsafe/report.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

class MalformedRecord : public std::runtime_error {
 public:
  explicit MalformedRecord(int line_no)
      : std::runtime_error("malformed detection record at line " +
                           std::to_string(line_no)),
        line_no(line_no) {}
  int line_no;
};

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& field_path)
      : std::runtime_error("scenario schema error at " + field_path),
        field_path(field_path) {}
  std::string field_path;
};

class ValidationFailed : public std::runtime_error {
 public:
  explicit ValidationFailed(ValidationResult result)
      : std::runtime_error("scenario validation failed: " +
                           (result.violations.empty()
                                ? std::string("?")
                                : result.violations.front())),
        result(std::move(result)) {}
  ValidationResult result;
};

struct ParsedDetections {
  std::vector<DetectedBox3D> boxes;
  int skipped_unknown_class{0};
};

/// Camera-frame mounting offset applied during conversion to the ego BEV
/// frame; defaults to zero (identity).
struct CameraMount {
  double forward_offset{0.0};
  double left_offset{0.0};
  double up_offset{0.0};
};

namespace ingest_detail {

inline bool parse_double(std::string_view token, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(std::string(token), &pos);
    return pos == token.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

}  // namespace ingest_detail

/// Parses KITTI object label text (16 space-separated fields with a
/// trailing score; 15 for ground truth, which then carries score = 1).
/// Camera frame (x right, y down, z forward, location at the box bottom)
/// is converted to the ego BEV frame. Unknown class labels are skipped
/// with a warning count; truncation/occlusion are parsed but unused at
/// desk scale, where difficulty is distance-based.
inline ParsedDetections parse_detections(std::string_view text,
                                         const CameraMount& mount = {}) {
  ParsedDetections out;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (fields >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != 16 && tokens.size() != 15) {
      throw MalformedRecord(line_no);
    }
    double num[15];
    for (size_t k = 1; k < tokens.size(); ++k) {
      if (!ingest_detail::parse_double(tokens[k], num[k - 1])) {
        throw MalformedRecord(line_no);
      }
    }
    if (tokens[0] != "Car") {
      ++out.skipped_unknown_class;
      continue;
    }
    const double h = num[7], w = num[8], l = num[9];
    const double cam_x = num[10], cam_y = num[11], cam_z = num[12];
    const double rot_y = num[13];

    DetectedBox3D box;
    box.class_label = ClassLabel::Car;
    box.center.x = cam_z + mount.forward_offset;
    box.center.y = -cam_x + mount.left_offset;
    // KITTI locations sit at the box bottom; recenter vertically.
    box.center.z = -cam_y + h * 0.5 + mount.up_offset;
    box.dims = {l, w, h};
    box.yaw = normalize_angle(-rot_y - std::numbers::pi / 2.0);
    box.score = tokens.size() == 16 ? num[14] : 1.0;
    out.boxes.push_back(box);
  }
  return out;
}

// --- scenario config (JSON) ---

namespace ingest_detail {

template <typename T>
inline T require(const nlohmann::json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (...) {
    throw SchemaError(path);
  }
}

inline const nlohmann::json& field(const nlohmann::json& j,
                                   const std::string& key,
                                   const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path);
  return *it;
}

}  // namespace ingest_detail

/// Parses the self-describing scenario document. The returned Scenario is
/// guaranteed to pass validate_scenario; anything else throws.
inline Scenario parse_scenario(const std::string& config_text) {
  namespace id = ingest_detail;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::exception&) {
    throw SchemaError("(document)");
  }

  Scenario s;
  s.id = id::require<std::string>(id::field(j, "id", "id"), "id");
  const std::string road =
      id::require<std::string>(id::field(j, "road_type", "road_type"),
                               "road_type");
  if (road == "street") {
    s.road_type = RoadType::Street;
  } else if (road == "highway") {
    s.road_type = RoadType::Highway;
  } else {
    throw SchemaError("road_type");
  }

  const auto& lanes = id::field(j, "lanes", "lanes");
  if (!lanes.is_array() || lanes.empty()) throw SchemaError("lanes");
  for (size_t i = 0; i < lanes.size(); ++i) {
    const std::string base = "lanes[" + std::to_string(i) + "]";
    Lane lane;
    lane.width = id::require<double>(
        id::field(lanes[i], "width", base + ".width"), base + ".width");
    const auto& cl = id::field(lanes[i], "centerline", base + ".centerline");
    if (!cl.is_array()) throw SchemaError(base + ".centerline");
    for (size_t p = 0; p < cl.size(); ++p) {
      const std::string ppath =
          base + ".centerline[" + std::to_string(p) + "]";
      if (!cl[p].is_array() || cl[p].size() != 2) throw SchemaError(ppath);
      lane.centerline.push_back({id::require<double>(cl[p][0], ppath),
                                 id::require<double>(cl[p][1], ppath)});
    }
    s.lanes.push_back(std::move(lane));
  }

  const auto& ego = id::field(j, "ego", "ego");
  s.ego_context.initial_state.p.x =
      id::require<double>(id::field(ego, "x", "ego.x"), "ego.x");
  s.ego_context.initial_state.p.y =
      id::require<double>(id::field(ego, "y", "ego.y"), "ego.y");
  s.ego_context.initial_state.v = kmh_to_ms(id::require<double>(
      id::field(ego, "speed_kmh", "ego.speed_kmh"), "ego.speed_kmh"));
  s.ego_context.initial_state.phi = id::require<double>(
      id::field(ego, "heading", "ego.heading"), "ego.heading");
  s.ego_context.road_type = s.road_type;
  s.ego_context.speed_range = road_speed_range(s.road_type);

  if (j.contains("objects")) {
    const auto& objects = j["objects"];
    if (!objects.is_array()) throw SchemaError("objects");
    for (size_t i = 0; i < objects.size(); ++i) {
      const std::string base = "objects[" + std::to_string(i) + "]";
      const auto& o = objects[i];
      ScenarioObject obj;
      auto num = [&](const char* key) {
        return id::require<double>(id::field(o, key, base + "." + key),
                                   base + "." + key);
      };
      obj.box.center = {num("x"), num("y"), num("z")};
      obj.box.dims = {num("l"), num("w"), num("h")};
      obj.box.yaw = num("yaw");
      obj.is_moving =
          id::require<bool>(id::field(o, "moving", base + ".moving"),
                            base + ".moving");
      obj.velocity = {num("vx"), num("vy")};
      s.objects.push_back(obj);
    }
  }

  if (j.contains("frames")) {
    const auto& frames = j["frames"];
    if (!frames.is_array()) throw SchemaError("frames");
    for (size_t i = 0; i < frames.size(); ++i) {
      const std::string base = "frames[" + std::to_string(i) + "]";
      FrameObservation frame;
      frame.t = id::require<double>(id::field(frames[i], "t", base + ".t"),
                                    base + ".t");
      const auto& pos = id::field(frames[i], "positions", base + ".positions");
      if (!pos.is_array()) throw SchemaError(base + ".positions");
      for (const auto& p : pos) {
        if (!p.is_array() || p.size() != 2) {
          throw SchemaError(base + ".positions");
        }
        frame.positions.push_back({id::require<double>(p[0], base),
                                   id::require<double>(p[1], base)});
      }
      s.frames.push_back(std::move(frame));
    }
  }

  ValidationResult validation = validate_scenario(s);
  if (!validation.ok()) throw ValidationFailed(std::move(validation));
  return s;
}

/// Inverse of parse_scenario, for round-tripping.
inline std::string write_scenario(const Scenario& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["road_type"] = to_string(s.road_type);
  j["lanes"] = nlohmann::json::array();
  for (const Lane& lane : s.lanes) {
    nlohmann::json lj;
    lj["width"] = lane.width;
    lj["centerline"] = nlohmann::json::array();
    for (const Vec2& p : lane.centerline) {
      lj["centerline"].push_back({p.x, p.y});
    }
    j["lanes"].push_back(std::move(lj));
  }
  j["ego"] = {{"x", s.ego_context.initial_state.p.x},
              {"y", s.ego_context.initial_state.p.y},
              {"speed_kmh", s.ego_context.initial_state.v * 3.6},
              {"heading", s.ego_context.initial_state.phi}};
  j["objects"] = nlohmann::json::array();
  for (const ScenarioObject& o : s.objects) {
    j["objects"].push_back({{"x", o.box.center.x},
                            {"y", o.box.center.y},
                            {"z", o.box.center.z},
                            {"l", o.box.dims.x},
                            {"w", o.box.dims.y},
                            {"h", o.box.dims.z},
                            {"yaw", o.box.yaw},
                            {"moving", o.is_moving},
                            {"vx", o.velocity.x},
                            {"vy", o.velocity.y}});
  }
  if (!s.frames.empty()) {
    j["frames"] = nlohmann::json::array();
    for (const FrameObservation& f : s.frames) {
      nlohmann::json fj;
      fj["t"] = f.t;
      fj["positions"] = nlohmann::json::array();
      for (const Vec2& p : f.positions) fj["positions"].push_back({p.x, p.y});
      j["frames"].push_back(std::move(fj));
    }
  }
  return j.dump(2) + "\n";
}

// --- report CSV ---

namespace ingest_detail {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("NA");
}

}  // namespace ingest_detail

/// RFC-4180 CSV, header row mandatory, CRLF line endings, one row per
/// (intention x attack setting) in the report's (already deterministic)
/// row order. Writing the same report twice yields byte-identical output.
inline std::string report_to_csv(const MetricsReport& report) {
  std::string out =
      "intention,setting,success_rate,collision_rate,safe_driving_rate,"
      "ap_easy,ap_moderate,ap_hard\r\n";
  for (const ReportRow& row : report.rows) {
    out += to_string(row.intention);
    out += ',';
    out += row.setting;
    out += ',';
    out += ingest_detail::format_number(row.rates.m_suc);
    out += ',';
    out += ingest_detail::format_optional(row.rates.m_cls);
    out += ',';
    out += ingest_detail::format_number(row.rates.m_saf);
    out += ',';
    out += ingest_detail::format_optional(row.ap_easy);
    out += ',';
    out += ingest_detail::format_optional(row.ap_moderate);
    out += ',';
    out += ingest_detail::format_optional(row.ap_hard);
    out += "\r\n";
  }
  return out;
}

inline void write_report(const MetricsReport& report,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << report_to_csv(report);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace roadsafe

#endif  // ROADSAFE_INGEST_HPP_
