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

#include "bevkit/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bevkit/config.hpp"
#include "bevkit/errors.hpp"
#include "bevkit/formats.hpp"
#include "bevkit/rng.hpp"

namespace bevkit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string frame_file_name(const char* prefix, std::int64_t frame_id,
                            const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%06lld%s", prefix,
                static_cast<long long>(frame_id), suffix);
  return buf;
}

/// Bounded worker pool over [0, n); rethrows the first worker exception.
void for_each_index(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const int workers = static_cast<int>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ToolkitConfig resolve_config(const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    return load_config(env);
  }
  return ToolkitConfig::defaults();
}

/// Planar twist rate between two consecutive ego poses.
Pose2 ego_twist_rate(const Pose2& prev, const Pose2& cur, double dt) {
  if (dt <= 0.0) return Pose2{};
  const Pose2 delta = compose(inverse(prev), cur);
  return Pose2{delta.tx / dt, delta.ty / dt, delta.theta / dt};
}

// ---- subcommand implementations ----

int cmd_gen_scene(const std::string& out_dir, const ToolkitConfig& cfg,
                  std::optional<std::uint64_t> seed) {
  SceneSpec spec = cfg.scene;
  if (seed) spec.seed = *seed;
  const GeneratedScene scene = generate_scene(spec);

  const fs::path base(out_dir);
  fs::create_directories(base / "blobs");
  fs::create_directories(base / "camdet");
  write_camera_models(base / "cameras.json", {scene.camera});

  std::vector<FrameRecord> records;
  std::vector<DetectionRecord> perfect;
  for (std::size_t f = 0; f < scene.frames.size(); ++f) {
    const LabeledFrame& frame = scene.frames[f];
    FrameRecord rec;
    rec.frame_id = frame.frame_id;
    rec.timestamp_s = frame.timestamp_s;
    rec.ego_pose = frame.ego_pose;
    rec.point_blob = "blobs/" + frame_file_name("frame_", frame.frame_id, ".bin");
    rec.labels = frame.labels;
    rec.zones = frame.zones;
    const std::string camdet =
        "camdet/" + frame_file_name("frame_", frame.frame_id, "_cam0.jsonl");
    rec.camera_detection_files.push_back(camdet);

    write_point_blob(base / rec.point_blob, frame.points);
    write_detections_2d(base / camdet, scene.camera_detections[f]);
    for (const EvalDetection& det : scene.perfect_detections[f]) {
      perfect.push_back(DetectionRecord{frame.frame_id, det});
    }
    records.push_back(std::move(rec));
  }
  write_frame_records(base / "frames.jsonl", records);
  write_detections_3d(base / "detections_perfect.jsonl", perfect);
  std::cout << "wrote " << records.size() << " frames to " << out_dir << "\n";
  return 0;
}

int cmd_build_gtdb(const std::string& input, const std::string& out_dir,
                   const ToolkitConfig& cfg) {
  const fs::path frames_path(input);
  const fs::path base = frames_path.parent_path();
  const std::vector<FrameRecord> records = read_frame_records(frames_path);
  std::vector<LabeledFrame> frames;
  frames.reserve(records.size());
  for (const FrameRecord& rec : records) frames.push_back(load_frame(rec, base));

  const GtDatabase db = build_database(frames, cfg.gtdb_history, cfg.gtdb_crop_margin_m);
  write_gt_database(out_dir, db);
  std::cout << "wrote " << db.entries.size() << " entries ("
            << db.broken_pairs.size() << " broken pairs) to " << out_dir << "\n";
  return 0;
}

int cmd_augment(const std::string& input, const std::string& gtdb_dir,
                const std::string& out_dir, const ToolkitConfig& cfg,
                std::optional<std::uint64_t> seed) {
  const fs::path frames_path(input);
  const fs::path base = frames_path.parent_path();
  std::vector<FrameRecord> records = read_frame_records(frames_path);
  std::vector<LabeledFrame> frames;
  frames.reserve(records.size());
  for (const FrameRecord& rec : records) frames.push_back(load_frame(rec, base));

  const GtDatabase db = read_gt_database(gtdb_dir);
  AugmentConfig aug = cfg.augment;
  if (seed) aug.seed = *seed;

  std::vector<json> report_lines;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    std::vector<LabeledFrame*> window;
    const std::size_t first = f + 1 >= static_cast<std::size_t>(cfg.gtdb_history)
                                  ? f + 1 - cfg.gtdb_history
                                  : 0;
    for (std::size_t k = first; k <= f; ++k) window.push_back(&frames[k]);

    Rng rng = Rng::derive(aug.seed, static_cast<std::uint64_t>(frames[f].frame_id));
    const AugmentResult result = sample_and_paste(window, db, aug, rng);
    for (const PastedObject& p : result.added) {
      report_lines.push_back(json{{"frame_id", frames[f].frame_id},
                                  {"event", "pasted"},
                                  {"entry_index", p.entry_index},
                                  {"object_id", p.object_id},
                                  {"points_added", p.points_added}});
    }
    for (const SkipReport& s : result.skipped) {
      report_lines.push_back(json{{"frame_id", frames[f].frame_id},
                                  {"event", "skipped"},
                                  {"class", s.class_name},
                                  {"attempts", s.attempts}});
    }
  }

  const fs::path out_base(out_dir);
  fs::create_directories(out_base / "blobs");
  for (std::size_t f = 0; f < frames.size(); ++f) {
    records[f].point_blob =
        "blobs/" + frame_file_name("frame_", frames[f].frame_id, ".bin");
    records[f].labels = frames[f].labels;
    write_point_blob(out_base / records[f].point_blob, frames[f].points);
  }
  write_frame_records(out_base / "frames.jsonl", records);
  // keep camera files reachable from the augmented records
  if (fs::exists(base / "cameras.json")) {
    fs::copy_file(base / "cameras.json", out_base / "cameras.json",
                  fs::copy_options::overwrite_existing);
  }
  for (const FrameRecord& rec : records) {
    for (const std::string& rel : rec.camera_detection_files) {
      fs::create_directories((out_base / rel).parent_path());
      fs::copy_file(base / rel, out_base / rel, fs::copy_options::overwrite_existing);
    }
  }
  {
    std::string bytes;
    for (const json& j : report_lines) bytes += j.dump() + "\n";
    std::ofstream out(out_base / "augment_report.jsonl", std::ios::binary);
    out << bytes;
  }
  std::cout << "augmented " << frames.size() << " frames into " << out_dir << "\n";
  return 0;
}

int cmd_targets_anchor(const std::string& input, const std::string& out_dir,
                       const std::string& mode, const ToolkitConfig& cfg, int jobs) {
  const fs::path frames_path(input);
  const fs::path base = frames_path.parent_path();
  const std::vector<FrameRecord> records = read_frame_records(frames_path);
  fs::create_directories(out_dir);

  AnchorGridSpec spec = cfg.anchor_grid;
  if (mode == "adaptive") spec.yaw_slots_rad = cfg.adaptive_yaw_slots_rad;

  for_each_index(records.size(), jobs, [&](std::size_t f) {
    const LabeledFrame frame = load_frame(records[f], base);
    std::vector<GtObject> gts;
    for (const FrameLabel& l : frame.labels) {
      gts.push_back(GtObject{l.box, l.class_name, l.object_id});
    }
    AssignmentResult result;
    if (mode == "baseline") {
      result = assign_baseline_iou(spec, gts);
    } else if (mode == "center") {
      result = assign_center_only(spec, gts);
    } else {
      result = assign_adaptive_shape(spec, gts, cfg.ellipse);
    }
    const fs::path out_base(out_dir);
    write_label_raster(out_base / frame_file_name("frame_", frame.frame_id,
                                                  "_labels.bin"),
                       spec, result);
    write_regression_targets(out_base / frame_file_name("frame_", frame.frame_id,
                                                        "_targets.jsonl"),
                             spec, result);
  });

  json classes = json::array();
  for (const ClassAnchorSpec& c : spec.classes) classes.push_back(c.name);
  const json meta{{"mode", mode},
                  {"classes", classes},
                  {"yaw_slots_rad", spec.yaw_slots_rad},
                  {"cell_size_m", spec.cell_size_m}};
  std::ofstream(fs::path(out_dir) / "meta.json") << meta.dump(2) << "\n";
  std::cout << "anchor targets (" << mode << ") for " << records.size()
            << " frames in " << out_dir << "\n";
  return 0;
}

int cmd_targets_heatmap(const std::string& input, const std::string& out_dir,
                        const std::string& mode, const ToolkitConfig& cfg, int jobs) {
  const fs::path frames_path(input);
  const fs::path base = frames_path.parent_path();
  const std::vector<FrameRecord> records = read_frame_records(frames_path);
  fs::create_directories(out_dir);

  HeatmapSpec spec = cfg.heatmap;
  spec.mode = (mode == "baseline") ? HeatmapMode::uncorrelated_baseline
                                   : HeatmapMode::correlated;

  for_each_index(records.size(), jobs, [&](std::size_t f) {
    const LabeledFrame frame = load_frame(records[f], base);
    std::vector<GtObject> gts;
    for (const FrameLabel& l : frame.labels) {
      gts.push_back(GtObject{l.box, l.class_name, l.object_id});
    }
    const Heatmap map = render_frame(gts, spec);
    const fs::path out_base(out_dir);
    write_heatmap_raster(out_base / frame_file_name("frame_", frame.frame_id,
                                                    "_heatmap.bin"),
                         map);
    std::vector<json> peaks;
    for (const auto& [key, p] : map.peaks) {
      peaks.push_back(json{{"key", key},
                           {"object_id", p.object_id},
                           {"score", p.score},
                           {"offset_x_cells", p.offset_x_cells},
                           {"offset_y_cells", p.offset_y_cells}});
    }
    std::string bytes;
    for (const json& j : peaks) bytes += j.dump() + "\n";
    std::ofstream(out_base / frame_file_name("frame_", frame.frame_id,
                                             "_peaks.jsonl"),
                  std::ios::binary)
        << bytes;
  });

  const json meta{{"mode", mode},
                  {"classes", spec.classes},
                  {"gaussian_scale", spec.gaussian_scale},
                  {"cell_size_m", spec.cell_size_m}};
  std::ofstream(fs::path(out_dir) / "meta.json") << meta.dump(2) << "\n";
  std::cout << "heatmap targets (" << mode << ") for " << records.size()
            << " frames in " << out_dir << "\n";
  return 0;
}

int cmd_fuse_camera(const std::string& input, const std::string& out_dir,
                    const ToolkitConfig& cfg, int jobs) {
  const fs::path frames_path(input);
  const fs::path base = frames_path.parent_path();
  std::vector<FrameRecord> records = read_frame_records(frames_path);
  const std::vector<CameraModel> rig = read_camera_models(base / "cameras.json");

  const fs::path out_base(out_dir);
  fs::create_directories(out_base / "blobs");

  for_each_index(records.size(), jobs, [&](std::size_t f) {
    FrameRecord& rec = records[f];
    LabeledFrame frame = load_frame(rec, base);
    if (rec.camera_detection_files.size() != rig.size()) {
      throw ConfigError("frame " + std::to_string(rec.frame_id) +
                        ": camera detection file count != camera count");
    }
    std::vector<std::vector<Detection2D>> dets;
    for (const std::string& rel : rec.camera_detection_files) {
      dets.push_back(read_detections_2d(base / rel));
    }
    // cameras.json stores the shutter offset relative to the frame stamp
    std::vector<CameraModel> cams = rig;
    for (CameraModel& c : cams) c.shutter_time_s += frame.timestamp_s;

    Pose2 twist{};
    if (f > 0) {
      twist = ego_twist_rate(records[f - 1].ego_pose, rec.ego_pose,
                             rec.timestamp_s - records[f - 1].timestamp_s);
    }
    PointCloudFrame pcf;
    pcf.frame_id = frame.frame_id;
    pcf.timestamp_s = frame.timestamp_s;
    pcf.ego_pose = frame.ego_pose;
    pcf.points = std::move(frame.points);
    const FusionColumns columns = annotate_frame(pcf, cams, dets, twist, cfg.fusion);
    apply_fusion_columns(pcf.points, columns);

    rec.point_blob = "blobs/" + frame_file_name("frame_", rec.frame_id, ".bin");
    write_point_blob(out_base / rec.point_blob, pcf.points);
  });

  write_frame_records(out_base / "frames.jsonl", records);
  // carry the rig along so downstream stages keep working
  write_camera_models(out_base / "cameras.json", rig);
  for (const FrameRecord& rec : records) {
    for (const std::string& rel : rec.camera_detection_files) {
      fs::create_directories((out_base / rel).parent_path());
      fs::copy_file(base / rel, out_base / rel, fs::copy_options::overwrite_existing);
    }
  }
  std::cout << "fused " << records.size() << " frames into " << out_dir << "\n";
  return 0;
}

int cmd_stack_temporal(const std::string& input, const std::string& out_dir,
                       const ToolkitConfig& cfg, int jobs) {
  const fs::path frames_path(input);
  const fs::path base = frames_path.parent_path();
  const std::vector<FrameRecord> records = read_frame_records(frames_path);
  fs::create_directories(out_dir);
  const int n = cfg.temporal_frames;

  std::vector<std::size_t> targets;
  for (std::size_t f = 0; f < records.size(); ++f) {
    if (f + 1 >= static_cast<std::size_t>(n)) targets.push_back(f);
  }

  const PillarReducer reducer =
      cfg.pillar_reducer == "max" ? max_reducer() : mean_reducer();

  for_each_index(targets.size(), jobs, [&](std::size_t t) {
    const std::size_t f = targets[t];
    std::vector<PointCloudFrame> window;
    std::vector<Pose2> poses;
    for (std::size_t k = f + 1 - n; k <= f; ++k) {
      const LabeledFrame lf = load_frame(records[k], base);
      PointCloudFrame pcf;
      pcf.frame_id = lf.frame_id;
      pcf.timestamp_s = lf.timestamp_s;
      pcf.ego_pose = lf.ego_pose;
      pcf.points = lf.points;
      window.push_back(std::move(pcf));
      poses.push_back(records[k].ego_pose);
    }
    const std::vector<PointCloud> compensated = compensate_and_merge(window, poses);
    const PillarTensor tensor = pillarize(compensated, cfg.pillars);
    const BevGrid grid = encode_and_stack(tensor, reducer);
    write_bev_grid(fs::path(out_dir) / frame_file_name("frame_", records[f].frame_id,
                                                       "_bev.bin"),
                   grid);
  });
  std::cout << "stacked " << targets.size() << " windows (" << n
            << " frames each) into " << out_dir << "\n";
  return 0;
}

int cmd_evaluate(const std::string& input, const std::string& detections_path,
                 const std::string& output, const std::string& pr_csv,
                 const ToolkitConfig& cfg) {
  const fs::path frames_path(input);
  const fs::path base = frames_path.parent_path();
  const std::vector<FrameRecord> records = read_frame_records(frames_path);
  const std::vector<DetectionRecord> det_records = read_detections_3d(detections_path);

  std::vector<EvalFrame> eval_frames;
  for (const FrameRecord& rec : records) {
    const LabeledFrame frame = load_frame(rec, base);
    EvalFrame ef;
    const std::vector<double> xs = frame.points.column(0);
    const std::vector<double> ys = frame.points.column(1);
    const std::vector<double> zs = frame.points.column(2);
    for (const FrameLabel& l : frame.labels) {
      EvalGtBox gt;
      gt.box = l.box;
      gt.class_name = l.class_name;
      gt.object_id = l.object_id;
      gt.point_count =
          static_cast<int>(points_in_box(xs, ys, zs, l.box, 0.0).size());
      ef.gt.push_back(std::move(gt));
    }
    for (const DetectionRecord& dr : det_records) {
      if (dr.frame_id == rec.frame_id) ef.detections.push_back(dr.detection);
    }
    ef.zones = frame.zones;
    eval_frames.push_back(std::move(ef));
  }

  const EvalReport report = evaluate_frames(eval_frames, cfg.eval);
  write_eval_report(output, report);
  if (!pr_csv.empty()) write_pr_curves_csv(pr_csv, report);

  for (const ClassEvalResult& r : report.per_class) {
    std::cout << r.class_name << " AP: ";
    if (r.ap) {
      std::cout << *r.ap;
    } else {
      std::cout << "n/a";
    }
    std::cout << " (gt " << r.gt_count << ")\n";
  }
  std::cout << "mAP: ";
  if (report.mean_ap) {
    std::cout << *report.mean_ap;
  } else {
    std::cout << "n/a";
  }
  std::cout << "\n";
  return 0;
}

int cmd_render(const std::string& input, const std::string& output,
               const std::string& kind, int class_index, int slot) {
  if (kind == "heatmap") {
    const HeatmapRaster r = read_heatmap_raster(input);
    if (class_index < 0 || static_cast<std::uint32_t>(class_index) >= r.classes) {
      throw ConfigError("class index out of range");
    }
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(r.cells_x) * r.cells_y);
    const std::size_t plane = pixels.size();
    for (std::size_t i = 0; i < plane; ++i) {
      const float v = r.scores[class_index * plane + i];
      pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0f, 1.0f) * 255.0f + 0.5f);
    }
    write_pgm(output, static_cast<int>(r.cells_x), static_cast<int>(r.cells_y), pixels);
  } else if (kind == "labels") {
    const LabelRaster r = read_label_raster(input);
    if (class_index < 0 || static_cast<std::uint32_t>(class_index) >= r.classes ||
        slot < 0 || static_cast<std::uint32_t>(slot) >= r.yaw_slots) {
      throw ConfigError("class or slot index out of range");
    }
    const std::size_t plane = static_cast<std::size_t>(r.cells_x) * r.cells_y;
    std::vector<std::uint8_t> pixels(plane);
    const std::size_t offset = (static_cast<std::size_t>(class_index) * r.yaw_slots +
                                slot) * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      switch (r.labels[offset + i]) {
        case 2: pixels[i] = 255; break;
        case 1: pixels[i] = 128; break;
        default: pixels[i] = 0; break;
      }
    }
    write_pgm(output, static_cast<int>(r.cells_x), static_cast<int>(r.cells_y), pixels);
  } else {
    throw ConfigError("render --mode must be heatmap or labels");
  }
  std::cout << "wrote " << output << "\n";
  return 0;
}

void print_error_record(const char* kind, const std::exception& e,
                        const std::string& path = "",
                        std::optional<std::size_t> offset = std::nullopt) {
  json record{{"error", kind}, {"message", e.what()}};
  if (!path.empty()) record["path"] = path;
  if (offset) record["byte_offset"] = *offset;
  std::cerr << record.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"BEV detection target generation, fusion and evaluation toolkit"};
  app.require_subcommand(1);

  std::string input, output, config_path, mode, detections, gtdb, pr_csv;
  int jobs = 1;
  int class_index = 0;
  int slot = 0;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) {
      sub->add_option("--input", input, "input frames file")->required();
    }
    sub->add_option("--output", output, "output path")->required();
    sub->add_option("--config", config_path,
                    "config file (default: $" + std::string(kConfigEnvVar) + ")");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App* gen = app.add_subcommand("gen-scene", "generate a synthetic scene");
  add_common(gen, false);
  gen->add_option("--seed", seed, "random seed");

  CLI::App* gtdb_cmd = app.add_subcommand("build-gtdb", "build the object database");
  add_common(gtdb_cmd, true);

  CLI::App* aug = app.add_subcommand("augment", "paste database objects into frames");
  add_common(aug, true);
  aug->add_option("--gtdb", gtdb, "database directory")->required();
  aug->add_option("--seed", seed, "random seed");

  CLI::App* ta = app.add_subcommand("targets-anchor", "anchor label generation");
  add_common(ta, true);
  ta->add_option("--mode", mode, "baseline | center | adaptive (default)")
      ->check(CLI::IsMember({"baseline", "center", "adaptive"}));

  CLI::App* th = app.add_subcommand("targets-heatmap", "heatmap target generation");
  add_common(th, true);
  th->add_option("--mode", mode, "baseline | correlated (default)")
      ->check(CLI::IsMember({"baseline", "correlated"}));

  CLI::App* fuse = app.add_subcommand("fuse-camera", "camera distance annotation");
  add_common(fuse, true);

  CLI::App* stack = app.add_subcommand("stack-temporal", "multi-frame BEV stacking");
  add_common(stack, true);

  CLI::App* eval = app.add_subcommand("evaluate", "detection evaluation");
  add_common(eval, true);
  eval->add_option("--detections", detections, "3D detections file")->required();
  eval->add_option("--pr-csv", pr_csv, "also write PR curves as CSV");

  CLI::App* render = app.add_subcommand("render", "export a raster as a PGM image");
  add_common(render, true);
  render->add_option("--mode", mode, "heatmap (default) | labels")
      ->check(CLI::IsMember({"heatmap", "labels"}));
  render->add_option("--class-index", class_index, "class channel");
  render->add_option("--slot", slot, "yaw slot (labels mode)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (mode.empty()) {
    if (ta->parsed()) mode = "adaptive";
    if (th->parsed()) mode = "correlated";
    if (render->parsed()) mode = "heatmap";
  }

  try {
    const ToolkitConfig cfg = resolve_config(config_path);
    if (gen->parsed()) return cmd_gen_scene(output, cfg, seed);
    if (gtdb_cmd->parsed()) return cmd_build_gtdb(input, output, cfg);
    if (aug->parsed()) return cmd_augment(input, gtdb, output, cfg, seed);
    if (ta->parsed()) return cmd_targets_anchor(input, output, mode, cfg, jobs);
    if (th->parsed()) return cmd_targets_heatmap(input, output, mode, cfg, jobs);
    if (fuse->parsed()) return cmd_fuse_camera(input, output, cfg, jobs);
    if (stack->parsed()) return cmd_stack_temporal(input, output, cfg, jobs);
    if (eval->parsed()) return cmd_evaluate(input, detections, output, pr_csv, cfg);
    if (render->parsed()) return cmd_render(input, output, mode, class_index, slot);
  } catch (const IoError& e) {
    print_error_record("io", e, e.path, e.byte_offset);
    return 1;
  } catch (const ConfigError& e) {
    print_error_record("config", e);
    return 1;
  } catch (const Error& e) {
    print_error_record("data", e);
    return 1;
  } catch (const std::exception& e) {
    print_error_record("internal", e);
    return 1;
  }
  return 2;
}

}  // namespace bevkit
