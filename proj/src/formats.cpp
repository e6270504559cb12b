// Copyright 2026 the bevkit authors
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

#include "bevkit/formats.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

using nlohmann::json;

// ---- low-level binary helpers (little-endian host assumed) ----

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& off, const std::filesystem::path& path) {
  if (off + sizeof(T) > in.size()) {
    throw IoError("truncated file", path.string(), off);
  }
  T value;
  std::memcpy(&value, in.data() + off, sizeof(T));
  off += sizeof(T);
  return value;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void spew(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file", path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed", path.string());
}

void check_magic(const std::string& bytes, const char* magic,
                 const std::filesystem::path& path) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), magic, 8) != 0) {
    throw IoError(std::string("bad magic, expected ") + magic, path.string(), 0);
  }
}

// ---- column tags ----

const std::map<std::string, std::string>& tag_by_name() {
  static const std::map<std::string, std::string> m = {
      {kColX, "x"},           {kColY, "y"},
      {kColZ, "z"},           {kColIntensity, "inty"},
      {kColTimeOffset, "toff"}, {kColDistVru, "dvru"},
      {kColDistVehicle, "dveh"}, {kColCamDepth, "cdep"},
      {"step", "step"}};
  return m;
}

std::array<char, 4> column_tag(const std::string& name) {
  std::array<char, 4> tag{};
  const auto it = tag_by_name().find(name);
  const std::string& s = it != tag_by_name().end() ? it->second : name;
  for (std::size_t i = 0; i < 4 && i < s.size(); ++i) tag[i] = s[i];
  return tag;
}

std::string column_name_from_tag(const std::array<char, 4>& tag) {
  std::string s;
  for (const char c : tag) {
    if (c == '\0') break;
    s.push_back(c);
  }
  for (const auto& [name, t] : tag_by_name()) {
    if (t == s) return name;
  }
  return s;
}

// ---- shared JSON fragments ----

json box_to_json(const Box7& box) {
  return json{{"cx_m", box.cx},       {"cy_m", box.cy},
              {"cz_m", box.cz},       {"width_m", box.width},
              {"length_m", box.length}, {"height_m", box.height},
              {"yaw_rad", box.yaw}};
}

Box7 box_from_json(const json& j) {
  return Box7(j.at("cx_m").get<double>(), j.at("cy_m").get<double>(),
              j.at("cz_m").get<double>(), j.at("width_m").get<double>(),
              j.at("length_m").get<double>(), j.at("height_m").get<double>(),
              j.at("yaw_rad").get<double>());
}

json pose_to_json(const Pose2& p) {
  return json{{"tx_m", p.tx}, {"ty_m", p.ty}, {"theta_rad", p.theta}};
}

Pose2 pose_from_json(const json& j) {
  return Pose2{j.at("tx_m").get<double>(), j.at("ty_m").get<double>(),
               j.at("theta_rad").get<double>()};
}

json label_to_json(const FrameLabel& label) {
  json j{{"object_id", label.object_id},
         {"class", label.class_name},
         {"box", box_to_json(label.box)}};
  if (label.pair_id) j["pair_id"] = *label.pair_id;
  return j;
}

FrameLabel label_from_json(const json& j) {
  FrameLabel label;
  label.object_id = j.at("object_id").get<std::int64_t>();
  label.class_name = j.at("class").get<std::string>();
  label.box = box_from_json(j.at("box"));
  if (j.contains("pair_id")) label.pair_id = j.at("pair_id").get<std::int64_t>();
  return label;
}

json zone_to_json(const NoLabelZone& zone) {
  json verts = json::array();
  for (const Vec2& v : zone.region.vertices) verts.push_back(json::array({v.x, v.y}));
  return json{{"origin", zone.origin == NoLabelZone::Origin::manual
                             ? "manual"
                             : "auto_low_points"},
              {"vertices_m", verts}};
}

NoLabelZone zone_from_json(const json& j) {
  NoLabelZone zone;
  zone.origin = j.at("origin").get<std::string>() == "manual"
                    ? NoLabelZone::Origin::manual
                    : NoLabelZone::Origin::auto_low_points;
  for (const auto& v : j.at("vertices_m")) {
    zone.region.vertices.push_back(Vec2{v.at(0).get<double>(), v.at(1).get<double>()});
  }
  return zone;
}

/// Parses a JSONL file; on a malformed line reports the byte offset of
/// that line's start.
std::vector<json> read_jsonl(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  std::vector<json> out;
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    std::size_t end = bytes.find('\n', offset);
    if (end == std::string::npos) end = bytes.size();
    const std::string_view line(bytes.data() + offset, end - offset);
    if (!line.empty()) {
      try {
        out.push_back(json::parse(line));
      } catch (const json::exception& e) {
        throw IoError(std::string("malformed JSON line: ") + e.what(),
                      path.string(), offset);
      }
    }
    offset = end + 1;
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::string bytes;
  for (const json& j : lines) {
    bytes += j.dump();
    bytes += '\n';
  }
  spew(path, bytes);
}

}  // namespace

// ---- point blob ----

void write_point_blob(const std::filesystem::path& path, const PointCloud& cloud) {
  if (cloud.column_count() > 10) {
    throw ConfigError("point blob supports at most 10 columns");
  }
  std::string bytes;
  bytes.reserve(64 + cloud.data.size() * 4);
  bytes.append("BVPTBLOB", 8);
  put<std::uint32_t>(bytes, 1);  // version
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(cloud.column_count()));
  put<std::uint64_t>(bytes, cloud.size());
  for (std::size_t i = 0; i < 10; ++i) {
    const std::array<char, 4> tag =
        i < cloud.column_count() ? column_tag(cloud.columns[i]) : std::array<char, 4>{};
    bytes.append(tag.data(), 4);
  }
  for (const double v : cloud.data) put<float>(bytes, static_cast<float>(v));
  spew(path, bytes);
}

PointCloud read_point_blob(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  check_magic(bytes, "BVPTBLOB", path);
  std::size_t off = 8;
  const auto version = take<std::uint32_t>(bytes, off, path);
  if (version != 1) throw IoError("unsupported point blob version", path.string(), 8);
  const auto n_cols = take<std::uint32_t>(bytes, off, path);
  const auto n_points = take<std::uint64_t>(bytes, off, path);

  PointCloud cloud;
  for (std::uint32_t i = 0; i < 10; ++i) {
    std::array<char, 4> tag{};
    for (char& c : tag) c = take<char>(bytes, off, path);
    if (i < n_cols) cloud.columns.push_back(column_name_from_tag(tag));
  }
  const std::uint64_t values = n_points * n_cols;
  if (bytes.size() != 64 + values * 4) {
    throw IoError("point blob size mismatch", path.string(), 64);
  }
  cloud.data.reserve(values);
  for (std::uint64_t i = 0; i < values; ++i) {
    cloud.data.push_back(take<float>(bytes, off, path));
  }
  return cloud;
}

// ---- frame records ----

std::vector<FrameRecord> read_frame_records(const std::filesystem::path& path) {
  std::vector<FrameRecord> out;
  for (const json& j : read_jsonl(path)) {
    try {
      FrameRecord rec;
      rec.frame_id = j.at("frame_id").get<std::int64_t>();
      rec.timestamp_s = j.at("timestamp_s").get<double>();
      rec.ego_pose = pose_from_json(j.at("ego_pose"));
      rec.ego_z_m = j.value("ego_z_m", 0.0);
      rec.ego_roll_rad = j.value("ego_roll_rad", 0.0);
      rec.ego_pitch_rad = j.value("ego_pitch_rad", 0.0);
      rec.point_blob = j.at("point_blob").get<std::string>();
      for (const json& l : j.at("labels")) rec.labels.push_back(label_from_json(l));
      // object ids are unique per frame; dangling pair ids are left to the
      // database builder, which reports them instead of failing
      std::set<std::int64_t> ids;
      for (const FrameLabel& l : rec.labels) {
        if (!ids.insert(l.object_id).second) {
          throw IoError("duplicate object id " + std::to_string(l.object_id) +
                            " in frame " + std::to_string(rec.frame_id),
                        path.string());
        }
      }
      if (j.contains("no_label_zones")) {
        for (const json& z : j.at("no_label_zones")) {
          rec.zones.push_back(zone_from_json(z));
        }
      }
      if (j.contains("camera_detections")) {
        for (const json& c : j.at("camera_detections")) {
          rec.camera_detection_files.push_back(c.get<std::string>());
        }
      }
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw IoError(std::string("bad frame record: ") + e.what(), path.string());
    }
  }
  return out;
}

void write_frame_records(const std::filesystem::path& path,
                         const std::vector<FrameRecord>& records) {
  std::vector<json> lines;
  lines.reserve(records.size());
  for (const FrameRecord& rec : records) {
    json labels = json::array();
    for (const FrameLabel& l : rec.labels) labels.push_back(label_to_json(l));
    json j{{"frame_id", rec.frame_id},
           {"timestamp_s", rec.timestamp_s},
           {"ego_pose", pose_to_json(rec.ego_pose)},
           {"ego_z_m", rec.ego_z_m},
           {"ego_roll_rad", rec.ego_roll_rad},
           {"ego_pitch_rad", rec.ego_pitch_rad},
           {"point_blob", rec.point_blob},
           {"labels", labels}};
    if (!rec.zones.empty()) {
      json zones = json::array();
      for (const NoLabelZone& z : rec.zones) zones.push_back(zone_to_json(z));
      j["no_label_zones"] = zones;
    }
    if (!rec.camera_detection_files.empty()) {
      j["camera_detections"] = rec.camera_detection_files;
    }
    lines.push_back(std::move(j));
  }
  write_jsonl(path, lines);
}

LabeledFrame load_frame(const FrameRecord& record,
                        const std::filesystem::path& base_dir) {
  LabeledFrame frame;
  frame.frame_id = record.frame_id;
  frame.timestamp_s = record.timestamp_s;
  frame.ego_pose = record.ego_pose;
  frame.labels = record.labels;
  frame.zones = record.zones;
  frame.points = read_point_blob(base_dir / record.point_blob);
  return frame;
}

// ---- camera models and 2D detections ----

std::vector<CameraModel> read_camera_models(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed camera file: ") + e.what(), path.string(), 0);
  }
  std::vector<CameraModel> out;
  for (const json& c : j.at("cameras")) {
    CameraModel cam;
    cam.fx = c.at("fx_px").get<double>();
    cam.fy = c.at("fy_px").get<double>();
    cam.cx = c.at("cx_px").get<double>();
    cam.cy = c.at("cy_px").get<double>();
    for (int i = 0; i < 9; ++i) cam.rotation[i] = c.at("rotation").at(i).get<double>();
    for (int i = 0; i < 3; ++i) {
      cam.translation[i] = c.at("translation_m").at(i).get<double>();
    }
    cam.image_width = c.at("image_width_px").get<int>();
    cam.image_height = c.at("image_height_px").get<int>();
    cam.shutter_time_s = c.at("shutter_time_s").get<double>();
    if (!cam.rotation_orthonormal()) {
      throw IoError("camera rotation not orthonormal", path.string());
    }
    out.push_back(cam);
  }
  return out;
}

void write_camera_models(const std::filesystem::path& path,
                         const std::vector<CameraModel>& cameras) {
  json arr = json::array();
  for (const CameraModel& cam : cameras) {
    arr.push_back(json{{"fx_px", cam.fx},
                       {"fy_px", cam.fy},
                       {"cx_px", cam.cx},
                       {"cy_px", cam.cy},
                       {"rotation", cam.rotation},
                       {"translation_m", cam.translation},
                       {"image_width_px", cam.image_width},
                       {"image_height_px", cam.image_height},
                       {"shutter_time_s", cam.shutter_time_s}});
  }
  spew(path, json{{"cameras", arr}}.dump(2) + "\n");
}

std::vector<Detection2D> read_detections_2d(const std::filesystem::path& path) {
  std::vector<Detection2D> out;
  for (const json& j : read_jsonl(path)) {
    Detection2D d;
    d.u_min = j.at("bbox_px").at(0).get<double>();
    d.v_min = j.at("bbox_px").at(1).get<double>();
    d.u_max = j.at("bbox_px").at(2).get<double>();
    d.v_max = j.at("bbox_px").at(3).get<double>();
    d.group = j.at("group").get<std::string>();
    d.confidence = j.at("confidence").get<double>();
    if (j.contains("depth_m")) d.depth_m = j.at("depth_m").get<double>();
    out.push_back(std::move(d));
  }
  return out;
}

void write_detections_2d(const std::filesystem::path& path,
                         const std::vector<Detection2D>& detections) {
  std::vector<json> lines;
  for (const Detection2D& d : detections) {
    json j{{"bbox_px", json::array({d.u_min, d.v_min, d.u_max, d.v_max})},
           {"group", d.group},
           {"confidence", d.confidence}};
    if (d.depth_m) j["depth_m"] = *d.depth_m;
    lines.push_back(std::move(j));
  }
  write_jsonl(path, lines);
}

// ---- 3D detections ----

std::vector<DetectionRecord> read_detections_3d(const std::filesystem::path& path) {
  std::vector<DetectionRecord> out;
  for (const json& j : read_jsonl(path)) {
    DetectionRecord rec;
    rec.frame_id = j.at("frame_id").get<std::int64_t>();
    rec.detection.box = box_from_json(j.at("box"));
    rec.detection.class_name = j.at("class").get<std::string>();
    rec.detection.confidence = j.at("confidence").get<double>();
    out.push_back(std::move(rec));
  }
  return out;
}

void write_detections_3d(const std::filesystem::path& path,
                         const std::vector<DetectionRecord>& detections) {
  std::vector<json> lines;
  for (const DetectionRecord& rec : detections) {
    lines.push_back(json{{"frame_id", rec.frame_id},
                         {"class", rec.detection.class_name},
                         {"confidence", rec.detection.confidence},
                         {"box", box_to_json(rec.detection.box)}});
  }
  write_jsonl(path, lines);
}

// ---- evaluation report ----

void write_eval_report(const std::filesystem::path& path, const EvalReport& report) {
  json per_class = json::array();
  for (const ClassEvalResult& r : report.per_class) {
    json thresholds = json::array();
    for (const auto& [thr, counts] : r.counts) {
      json entry{{"threshold_m", thr},
                 {"tp", counts.tp},
                 {"fp", counts.fp},
                 {"fn", counts.fn}};
      const auto curve = r.pr_curves.find(thr);
      if (curve != r.pr_curves.end()) {
        json points = json::array();
        for (const PrPoint& p : curve->second) {
          points.push_back(json::array({p.confidence, p.recall, p.precision}));
        }
        entry["pr_curve"] = points;
      }
      thresholds.push_back(std::move(entry));
    }
    json c{{"class", r.class_name},
           {"ap", r.ap ? json(*r.ap) : json(nullptr)},
           {"gt_count", r.gt_count},
           {"ignored_detections", r.ignored_detections},
           {"ignored_gt", r.ignored_gt},
           {"thresholds", thresholds}};
    per_class.push_back(std::move(c));
  }
  const json j{{"version", 1},
               {"mean_ap", report.mean_ap ? json(*report.mean_ap) : json(nullptr)},
               {"per_class", per_class}};
  spew(path, j.dump(2) + "\n");
}

void write_pr_curves_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::string out = "class,threshold_m,confidence,recall,precision\n";
  for (const ClassEvalResult& r : report.per_class) {
    for (const auto& [thr, curve] : r.pr_curves) {
      for (const PrPoint& p : curve) {
        out += r.class_name;
        out += ',';
        out += json(thr).dump();
        out += ',';
        out += json(p.confidence).dump();
        out += ',';
        out += json(p.recall).dump();
        out += ',';
        out += json(p.precision).dump();
        out += '\n';
      }
    }
  }
  spew(path, out);
}

// ---- ground truth database ----

namespace {

std::string entry_blob_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "entry_%06zu.bin", index);
  return buf;
}

}  // namespace

void write_gt_database(const std::filesystem::path& dir, const GtDatabase& db) {
  std::filesystem::create_directories(dir);
  json entries = json::array();
  for (std::size_t i = 0; i < db.entries.size(); ++i) {
    const GtDatabaseEntry& e = db.entries[i];

    // all steps concatenated, with a step column appended
    PointCloud blob;
    if (!e.steps.empty()) {
      blob.columns = e.steps[0].points.columns;
      blob.columns.push_back("step");
      for (std::size_t k = 0; k < e.steps.size(); ++k) {
        const PointCloud& pts = e.steps[k].points;
        for (std::size_t r = 0; r < pts.size(); ++r) {
          for (std::size_t c = 0; c < pts.column_count(); ++c) {
            blob.data.push_back(pts.at(r, c));
          }
          blob.data.push_back(static_cast<double>(k));
        }
      }
    }
    write_point_blob(dir / entry_blob_name(i), blob);

    json steps = json::array();
    for (const EntryStep& s : e.steps) {
      steps.push_back(json{{"pose_in_canonical", pose_to_json(s.pose_in_canonical)},
                           {"box_world", box_to_json(s.box_world)},
                           {"interpolated", s.interpolated},
                           {"point_count", s.points.size()}});
    }
    json je{{"entry_id", e.entry_id},
            {"source_frame_id", e.source_frame_id},
            {"object_id", e.object_id},
            {"class", e.class_name},
            {"width_m", e.width_m},
            {"length_m", e.length_m},
            {"height_m", e.height_m},
            {"z_center_m", e.z_center_m},
            {"steps", steps},
            {"points_blob", entry_blob_name(i)}};
    if (e.pair_entry) {
      je["pair_entry"] = *e.pair_entry;
      je["partner_in_canonical"] = pose_to_json(*e.partner_in_canonical);
    }
    entries.push_back(std::move(je));
  }
  json broken = json::array();
  for (const BrokenPairReport& b : db.broken_pairs) {
    broken.push_back(json{{"frame_id", b.frame_id},
                          {"object_id", b.object_id},
                          {"pair_id", b.pair_id}});
  }
  const json index{{"version", 1}, {"entries", entries}, {"broken_pairs", broken}};
  spew(dir / "index.json", index.dump(2) + "\n");
}

GtDatabase read_gt_database(const std::filesystem::path& dir) {
  const std::filesystem::path index_path = dir / "index.json";
  json index;
  try {
    index = json::parse(slurp(index_path));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed database index: ") + e.what(),
                  index_path.string(), 0);
  }
  GtDatabase db;
  for (const json& je : index.at("entries")) {
    GtDatabaseEntry e;
    e.entry_id = je.at("entry_id").get<std::int64_t>();
    e.source_frame_id = je.at("source_frame_id").get<std::int64_t>();
    e.object_id = je.at("object_id").get<std::int64_t>();
    e.class_name = je.at("class").get<std::string>();
    e.width_m = je.at("width_m").get<double>();
    e.length_m = je.at("length_m").get<double>();
    e.height_m = je.at("height_m").get<double>();
    e.z_center_m = je.at("z_center_m").get<double>();
    if (je.contains("pair_entry")) {
      e.pair_entry = je.at("pair_entry").get<std::size_t>();
      e.partner_in_canonical = pose_from_json(je.at("partner_in_canonical"));
    }

    const PointCloud blob = read_point_blob(dir / je.at("points_blob").get<std::string>());
    const auto step_col = blob.column_index("step");

    std::size_t step_idx = 0;
    for (const json& js : je.at("steps")) {
      EntryStep step;
      step.pose_in_canonical = pose_from_json(js.at("pose_in_canonical"));
      step.box_world = box_from_json(js.at("box_world"));
      step.interpolated = js.at("interpolated").get<bool>();
      step.points.columns = blob.columns;
      if (step_col) step.points.columns.pop_back();
      if (step_col) {
        for (std::size_t r = 0; r < blob.size(); ++r) {
          if (static_cast<std::size_t>(blob.at(r, *step_col)) != step_idx) continue;
          for (std::size_t c = 0; c + 1 < blob.column_count(); ++c) {
            step.points.data.push_back(blob.at(r, c));
          }
        }
      }
      e.steps.push_back(std::move(step));
      ++step_idx;
    }
    db.entries.push_back(std::move(e));
  }
  for (const json& jb : index.at("broken_pairs")) {
    db.broken_pairs.push_back(BrokenPairReport{jb.at("frame_id").get<std::int64_t>(),
                                               jb.at("object_id").get<std::int64_t>(),
                                               jb.at("pair_id").get<std::int64_t>()});
  }
  return db;
}

// ---- anchor label raster ----

void write_label_raster(const std::filesystem::path& path, const AnchorGridSpec& spec,
                        const AssignmentResult& result) {
  std::string bytes;
  bytes.append("BVLBLRAS", 8);
  put<std::uint32_t>(bytes, 1);
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(spec.cells_x()));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(spec.cells_y()));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(spec.yaw_slots_rad.size()));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(spec.classes.size()));
  put<double>(bytes, spec.cell_size_m);
  put<double>(bytes, spec.x_min_m);
  put<double>(bytes, spec.y_min_m);
  for (const std::vector<AnchorLabel>& plane : result.labels) {
    for (const AnchorLabel label : plane) {
      put<std::uint8_t>(bytes, static_cast<std::uint8_t>(label));
    }
  }
  spew(path, bytes);
}

LabelRaster read_label_raster(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  check_magic(bytes, "BVLBLRAS", path);
  std::size_t off = 8;
  const auto version = take<std::uint32_t>(bytes, off, path);
  if (version != 1) throw IoError("unsupported label raster version", path.string(), 8);
  LabelRaster r;
  r.cells_x = take<std::uint32_t>(bytes, off, path);
  r.cells_y = take<std::uint32_t>(bytes, off, path);
  r.yaw_slots = take<std::uint32_t>(bytes, off, path);
  r.classes = take<std::uint32_t>(bytes, off, path);
  r.cell_size_m = take<double>(bytes, off, path);
  r.x_min_m = take<double>(bytes, off, path);
  r.y_min_m = take<double>(bytes, off, path);
  const std::size_t n = static_cast<std::size_t>(r.cells_x) * r.cells_y *
                        r.yaw_slots * r.classes;
  if (bytes.size() != off + n) {
    throw IoError("label raster size mismatch", path.string(), off);
  }
  r.labels.resize(n);
  std::memcpy(r.labels.data(), bytes.data() + off, n);
  return r;
}

void write_regression_targets(const std::filesystem::path& path,
                              const AnchorGridSpec& spec,
                              const AssignmentResult& result) {
  std::vector<json> lines;
  for (const ForegroundAnchor& fa : result.foreground) {
    lines.push_back(json{
        {"class", spec.classes[fa.index.class_idx].name},
        {"ix", fa.index.ix},
        {"iy", fa.index.iy},
        {"yaw_slot", fa.index.yaw_slot},
        {"object_id", fa.object_id},
        {"target",
         json::array({fa.target.dx_m, fa.target.dy_m, fa.target.dz_m,
                      fa.target.dlog_length, fa.target.dlog_width,
                      fa.target.dlog_height, fa.target.sin_yaw, fa.target.cos_yaw})}});
  }
  write_jsonl(path, lines);
}

// ---- heatmap raster ----

void write_heatmap_raster(const std::filesystem::path& path, const Heatmap& map) {
  std::string bytes;
  bytes.append("BVHEATMP", 8);
  put<std::uint32_t>(bytes, 1);
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(map.spec.cells_x));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(map.spec.cells_y));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(map.channels.size()));
  put<double>(bytes, map.spec.cell_size_m);
  put<double>(bytes, map.spec.x_min_m);
  put<double>(bytes, map.spec.y_min_m);
  for (const std::vector<double>& channel : map.channels) {
    for (const double v : channel) put<float>(bytes, static_cast<float>(v));
  }
  spew(path, bytes);
}

HeatmapRaster read_heatmap_raster(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  check_magic(bytes, "BVHEATMP", path);
  std::size_t off = 8;
  const auto version = take<std::uint32_t>(bytes, off, path);
  if (version != 1) throw IoError("unsupported heatmap version", path.string(), 8);
  HeatmapRaster r;
  r.cells_x = take<std::uint32_t>(bytes, off, path);
  r.cells_y = take<std::uint32_t>(bytes, off, path);
  r.classes = take<std::uint32_t>(bytes, off, path);
  r.cell_size_m = take<double>(bytes, off, path);
  r.x_min_m = take<double>(bytes, off, path);
  r.y_min_m = take<double>(bytes, off, path);
  const std::size_t n = static_cast<std::size_t>(r.cells_x) * r.cells_y * r.classes;
  if (bytes.size() != off + n * 4) {
    throw IoError("heatmap size mismatch", path.string(), off);
  }
  r.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.scores[i] = take<float>(bytes, off, path);
  return r;
}

// ---- stacked BEV grid ----

void write_bev_grid(const std::filesystem::path& path, const BevGrid& grid) {
  std::string bytes;
  bytes.append("BVBEVGRD", 8);
  put<std::uint32_t>(bytes, 1);
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(grid.size_x));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(grid.size_y));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(grid.channels));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(grid.n_frames));
  put<double>(bytes, grid.cell_size_m);
  put<double>(bytes, grid.x_min_m);
  put<double>(bytes, grid.y_min_m);
  // channel order tag, fixed 16 bytes
  const char order[16] = "frame_major_old";  // oldest frame first
  bytes.append(order, 16);
  for (const double v : grid.data) put<float>(bytes, static_cast<float>(v));
  spew(path, bytes);
}

BevGrid read_bev_grid(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  check_magic(bytes, "BVBEVGRD", path);
  std::size_t off = 8;
  const auto version = take<std::uint32_t>(bytes, off, path);
  if (version != 1) throw IoError("unsupported grid version", path.string(), 8);
  BevGrid grid;
  grid.size_x = static_cast<int>(take<std::uint32_t>(bytes, off, path));
  grid.size_y = static_cast<int>(take<std::uint32_t>(bytes, off, path));
  grid.channels = static_cast<int>(take<std::uint32_t>(bytes, off, path));
  grid.n_frames = static_cast<int>(take<std::uint32_t>(bytes, off, path));
  grid.cell_size_m = take<double>(bytes, off, path);
  grid.x_min_m = take<double>(bytes, off, path);
  grid.y_min_m = take<double>(bytes, off, path);
  char order[16];
  for (char& c : order) c = take<char>(bytes, off, path);
  if (std::string_view(order, 15) != "frame_major_old") {
    throw IoError("unknown channel order tag", path.string(), off - 16);
  }
  const std::size_t n = static_cast<std::size_t>(grid.size_x) * grid.size_y *
                        grid.channels;
  if (bytes.size() != off + n * 4) {
    throw IoError("grid size mismatch", path.string(), off);
  }
  grid.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) grid.data[i] = take<float>(bytes, off, path);
  return grid;
}

// ---- PGM ----

void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& pixels) {
  std::string bytes = "P5\n" + std::to_string(width) + " " +
                      std::to_string(height) + "\n255\n";
  bytes.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  spew(path, bytes);
}

}  // namespace bevkit
