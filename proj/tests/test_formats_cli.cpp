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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bevkit/cli.hpp"
#include "bevkit/config.hpp"
#include "bevkit/errors.hpp"
#include "bevkit/formats.hpp"
#include "bevkit/scene_gen.hpp"

using namespace bevkit;
namespace fs = std::filesystem;

namespace {

fs::path test_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("bevkit_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

PointCloud sample_cloud() {
  PointCloud cloud = PointCloud::with_standard_columns();
  cloud.append_row({1.25, -3.5, 0.75, 0.5, 0.0, 4.0, 4.0, 0.0});
  cloud.append_row({-2.0, 0.125, 1.5, 0.25, 0.0625, 1.5, 4.0, 12.5});
  return cloud;
}

}  // namespace

TEST_CASE("point blob round-trips byte-identically") {
  const fs::path dir = test_dir("blob");
  const PointCloud cloud = sample_cloud();

  write_point_blob(dir / "a.bin", cloud);
  const PointCloud loaded = read_point_blob(dir / "a.bin");
  CHECK(loaded.columns == cloud.columns);
  CHECK(loaded.data == cloud.data);  // values chosen exactly representable

  write_point_blob(dir / "b.bin", loaded);
  CHECK(file_bytes(dir / "a.bin") == file_bytes(dir / "b.bin"));

  PointCloud too_wide;
  too_wide.columns.assign(11, "c");
  CHECK_THROWS_AS(write_point_blob(dir / "c.bin", too_wide), ConfigError);
}

TEST_CASE("truncated and corrupt blobs are rejected with offsets") {
  const fs::path dir = test_dir("blob_bad");
  write_text(dir / "bad.bin", "NOTMAGIC blah");
  try {
    read_point_blob(dir / "bad.bin");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.byte_offset == 0);
  }
}

TEST_CASE("frame records round-trip byte-identically") {
  const fs::path dir = test_dir("frames");
  FrameRecord rec;
  rec.frame_id = 3;
  rec.timestamp_s = 1.5;
  rec.ego_pose = Pose2{1.0, -2.0, 0.25};
  rec.point_blob = "blobs/frame_000003.bin";
  rec.labels.push_back(FrameLabel{7, "truck", 8, Box7(1, 2, 2, 2.5, 7, 3.5, 0.5)});
  rec.labels.push_back(FrameLabel{8, "semi_trailer", 7, Box7(-4, 1, 2, 2.5, 12, 4, 0.25)});
  NoLabelZone zone;
  zone.region = box_to_bev_polygon(Box7(5, 5, 0, 4, 4, 2, 0));
  zone.origin = NoLabelZone::Origin::manual;
  rec.zones.push_back(zone);
  rec.camera_detection_files = {"camdet/frame_000003_cam0.jsonl"};

  write_frame_records(dir / "frames.jsonl", {rec});
  const auto loaded = read_frame_records(dir / "frames.jsonl");
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].frame_id == 3);
  CHECK(loaded[0].labels[0].pair_id == 8);
  CHECK(loaded[0].zones.size() == 1);

  write_frame_records(dir / "again.jsonl", loaded);
  CHECK(file_bytes(dir / "frames.jsonl") == file_bytes(dir / "again.jsonl"));
}

TEST_CASE("malformed frame lines report their byte offset") {
  const fs::path dir = test_dir("frames_bad");
  const std::string good =
      R"({"ego_pose":{"theta_rad":0.0,"tx_m":0.0,"ty_m":0.0},"frame_id":0,)"
      R"("labels":[],"point_blob":"x.bin","timestamp_s":0.0})";
  write_text(dir / "frames.jsonl", good + "\n{this is not json}\n");
  try {
    read_frame_records(dir / "frames.jsonl");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    REQUIRE(e.byte_offset.has_value());
    CHECK(*e.byte_offset == good.size() + 1);
  }
}

TEST_CASE("2D and 3D detection files round-trip") {
  const fs::path dir = test_dir("dets");

  Detection2D d2;
  d2.u_min = 10;
  d2.v_min = 20;
  d2.u_max = 110;
  d2.v_max = 90;
  d2.group = kGroupVru;
  d2.confidence = 0.75;
  d2.depth_m = 14.5;
  write_detections_2d(dir / "d2.jsonl", {d2});
  const auto loaded2 = read_detections_2d(dir / "d2.jsonl");
  REQUIRE(loaded2.size() == 1);
  CHECK(loaded2[0].depth_m == 14.5);
  write_detections_2d(dir / "d2_again.jsonl", loaded2);
  CHECK(file_bytes(dir / "d2.jsonl") == file_bytes(dir / "d2_again.jsonl"));

  DetectionRecord d3;
  d3.frame_id = 5;
  d3.detection = EvalDetection{Box7(1, 2, 1, 2, 4.5, 1.5, 0.75), "car", 0.625};
  write_detections_3d(dir / "d3.jsonl", {d3});
  const auto loaded3 = read_detections_3d(dir / "d3.jsonl");
  REQUIRE(loaded3.size() == 1);
  CHECK(loaded3[0].detection.confidence == 0.625);
  write_detections_3d(dir / "d3_again.jsonl", loaded3);
  CHECK(file_bytes(dir / "d3.jsonl") == file_bytes(dir / "d3_again.jsonl"));
}

TEST_CASE("ground truth database round-trips") {
  const fs::path dir = test_dir("gtdb");

  // build a small database from a two-object frame
  LabeledFrame frame;
  frame.frame_id = 0;
  frame.points.columns = {kColX, kColY, kColZ};
  for (int i = 0; i < 10; ++i) {
    frame.points.data.insert(frame.points.data.end(),
                             {0.25 * i, 0.125 * i, 1.0});
  }
  frame.labels.push_back(FrameLabel{1, "truck", 2, Box7(1, 0.5, 1, 3, 4, 3, 0.1)});
  frame.labels.push_back(FrameLabel{2, "semi_trailer", 1, Box7(-2, 0, 1, 3, 5, 3, 0.0)});
  const GtDatabase db = build_database({frame}, 1);

  write_gt_database(dir / "db", db);
  const GtDatabase loaded = read_gt_database(dir / "db");
  REQUIRE(loaded.entries.size() == db.entries.size());
  for (std::size_t i = 0; i < db.entries.size(); ++i) {
    CHECK(loaded.entries[i].class_name == db.entries[i].class_name);
    CHECK(loaded.entries[i].steps.size() == db.entries[i].steps.size());
    CHECK(loaded.entries[i].steps[0].points.size() ==
          db.entries[i].steps[0].points.size());
    CHECK(loaded.entries[i].pair_entry == db.entries[i].pair_entry);
  }

  write_gt_database(dir / "db2", loaded);
  CHECK(file_bytes(dir / "db" / "index.json") == file_bytes(dir / "db2" / "index.json"));
  CHECK(file_bytes(dir / "db" / "entry_000000.bin") ==
        file_bytes(dir / "db2" / "entry_000000.bin"));
}

TEST_CASE("raster and grid formats round-trip") {
  const fs::path dir = test_dir("rasters");

  SUBCASE("label raster") {
    AnchorGridSpec spec;
    spec.x_min_m = 0;
    spec.x_max_m = 2;
    spec.y_min_m = 0;
    spec.y_max_m = 2;
    spec.cell_size_m = 0.2;
    spec.yaw_slots_rad = {0.0};
    spec.classes = {{"car"}};
    AssignmentResult result;
    result.labels.assign(1, std::vector<AnchorLabel>(100, AnchorLabel::background));
    result.labels[0][37] = AnchorLabel::foreground;
    result.labels[0][38] = AnchorLabel::ignore;

    write_label_raster(dir / "l.bin", spec, result);
    const LabelRaster r = read_label_raster(dir / "l.bin");
    CHECK(r.cells_x == 10);
    CHECK(r.labels[37] == 2);
    CHECK(r.labels[38] == 1);
  }
  SUBCASE("heatmap raster") {
    Heatmap map;
    map.spec.cells_x = 8;
    map.spec.cells_y = 4;
    map.spec.cell_size_m = 0.2;
    map.spec.x_min_m = -0.8;
    map.spec.y_min_m = -0.4;
    map.spec.classes = {"car"};
    map.channels.assign(1, std::vector<double>(32, 0.0));
    map.channels[0][5] = 0.5;
    write_heatmap_raster(dir / "h.bin", map);
    const HeatmapRaster r = read_heatmap_raster(dir / "h.bin");
    CHECK(r.cells_x == 8);
    CHECK(r.scores[5] == 0.5f);
  }
  SUBCASE("bev grid") {
    BevGrid grid;
    grid.size_x = 4;
    grid.size_y = 3;
    grid.channels = 6;
    grid.n_frames = 2;
    grid.cell_size_m = 0.2;
    grid.x_min_m = -1;
    grid.y_min_m = -1;
    grid.data.assign(4 * 3 * 6, 0.0);
    grid.at(1, 2, 4) = 0.75;
    write_bev_grid(dir / "g.bin", grid);
    const BevGrid r = read_bev_grid(dir / "g.bin");
    CHECK(r.n_frames == 2);
    CHECK(r.at(1, 2, 4) == 0.75);
    write_bev_grid(dir / "g2.bin", r);
    CHECK(file_bytes(dir / "g.bin") == file_bytes(dir / "g2.bin"));
  }
  SUBCASE("pgm header") {
    write_pgm(dir / "img.pgm", 3, 2, {0, 64, 128, 192, 255, 32});
    const std::string bytes = file_bytes(dir / "img.pgm");
    CHECK(bytes.substr(0, 3) == "P5\n");
    CHECK(bytes.size() == std::string("P5\n3 2\n255\n").size() + 6);
  }
}

TEST_CASE("config loading") {
  const fs::path dir = test_dir("config");

  SUBCASE("defaults pass through an empty document") {
    write_text(dir / "empty.json", "{}");
    const ToolkitConfig cfg = load_config(dir / "empty.json");
    CHECK(cfg.anchor_grid.cell_size_m == 0.2);
    CHECK(cfg.temporal_frames == 3);
    CHECK(cfg.eval.min_points_auto_nlz == 5);
  }
  SUBCASE("overrides apply") {
    write_text(dir / "override.json",
               R"({"heatmap": {"gaussian_scale": 0.125},
                   "temporal": {"n_frames": 2},
                   "eval": {"max_range_m": 50.0}})");
    const ToolkitConfig cfg = load_config(dir / "override.json");
    CHECK(cfg.heatmap.gaussian_scale == 0.125);
    CHECK(cfg.temporal_frames == 2);
    CHECK(cfg.eval.max_range_m == 50.0);
    // untouched sections keep defaults
    CHECK(cfg.anchor_grid.cell_size_m == 0.2);
  }
  SUBCASE("unknown keys are rejected") {
    write_text(dir / "typo.json", R"({"heatmap": {"gausian_scale": 0.125}})");
    CHECK_THROWS_AS(load_config(dir / "typo.json"), ConfigError);
    write_text(dir / "section.json", R"({"heatmaps": {}})");
    CHECK_THROWS_AS(load_config(dir / "section.json"), ConfigError);
  }
}

TEST_CASE("cli exit codes") {
  SUBCASE("usage errors exit 2") {
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"evaluate"}) == 2);  // missing required options
  }
  SUBCASE("help exits 0") {
    CHECK(run_cli({"--help"}) == 0);
  }
  SUBCASE("data errors exit 1") {
    const fs::path dir = test_dir("cli_bad");
    write_text(dir / "frames.jsonl", "{broken\n");
    CHECK(run_cli({"evaluate", "--input", (dir / "frames.jsonl").string(),
                   "--detections", (dir / "missing.jsonl").string(), "--output",
                   (dir / "report.json").string()}) == 1);
  }
}

TEST_CASE("cli mini pipeline: generate then evaluate perfectly") {
  const fs::path dir = test_dir("cli_mini");
  write_text(dir / "config.json",
             R"({"scene": {"n_frames": 2, "cars": 1, "truck_trailer_pairs": 1,
                           "pedestrians": 1, "cyclists": 0}})");

  const std::string cfg = (dir / "config.json").string();
  REQUIRE(run_cli({"gen-scene", "--output", (dir / "scene").string(), "--config",
                   cfg, "--seed", "3"}) == 0);
  CHECK(fs::exists(dir / "scene" / "frames.jsonl"));
  CHECK(fs::exists(dir / "scene" / "cameras.json"));
  CHECK(fs::exists(dir / "scene" / "detections_perfect.jsonl"));

  // deterministic regeneration
  REQUIRE(run_cli({"gen-scene", "--output", (dir / "scene2").string(), "--config",
                   cfg, "--seed", "3"}) == 0);
  CHECK(file_bytes(dir / "scene" / "frames.jsonl") ==
        file_bytes(dir / "scene2" / "frames.jsonl"));

  REQUIRE(run_cli({"evaluate", "--input", (dir / "scene" / "frames.jsonl").string(),
                   "--detections",
                   (dir / "scene" / "detections_perfect.jsonl").string(),
                   "--output", (dir / "report.json").string(), "--pr-csv",
                   (dir / "pr.csv").string(), "--config", cfg}) == 0);

  const nlohmann::json report = nlohmann::json::parse(file_bytes(dir / "report.json"));
  CHECK(report.at("mean_ap").get<double>() == doctest::Approx(1.0));
  CHECK(file_bytes(dir / "pr.csv").starts_with(
      "class,threshold_m,confidence,recall,precision"));
}

TEST_CASE("cli target generation, rendering and parallel determinism") {
  const fs::path dir = test_dir("cli_targets");
  write_text(dir / "config.json",
             R"({"scene": {"n_frames": 2, "cars": 1, "truck_trailer_pairs": 1,
                           "pedestrians": 0, "cyclists": 0}})");
  const std::string cfg = (dir / "config.json").string();
  REQUIRE(run_cli({"gen-scene", "--output", (dir / "scene").string(), "--config",
                   cfg, "--seed", "21"}) == 0);
  const std::string frames = (dir / "scene" / "frames.jsonl").string();

  REQUIRE(run_cli({"targets-anchor", "--input", frames, "--output",
                   (dir / "anchors").string(), "--mode", "adaptive", "--config",
                   cfg}) == 0);
  CHECK(fs::exists(dir / "anchors" / "frame_000000_labels.bin"));
  CHECK(fs::exists(dir / "anchors" / "meta.json"));

  // rendering the truck channel shows the elliptical foreground patch
  REQUIRE(run_cli({"render", "--input",
                   (dir / "anchors" / "frame_000000_labels.bin").string(),
                   "--output", (dir / "labels.pgm").string(), "--mode", "labels",
                   "--class-index", "1", "--slot", "0"}) == 0);
  const std::string pgm = file_bytes(dir / "labels.pgm");
  CHECK(pgm.starts_with("P5\n"));
  const std::size_t fg_pixels = std::count(pgm.begin(), pgm.end(), '\xff');
  const std::size_t ignore_pixels = std::count(pgm.begin(), pgm.end(), '\x80');
  CHECK(fg_pixels >= 5);               // the ellipse interior
  CHECK(ignore_pixels > fg_pixels);    // surrounded by the wider ignore band

  REQUIRE(run_cli({"targets-heatmap", "--input", frames, "--output",
                   (dir / "heat1").string(), "--config", cfg, "--jobs", "1"}) == 0);
  REQUIRE(run_cli({"targets-heatmap", "--input", frames, "--output",
                   (dir / "heat4").string(), "--config", cfg, "--jobs", "4"}) == 0);
  CHECK(file_bytes(dir / "heat1" / "frame_000001_heatmap.bin") ==
        file_bytes(dir / "heat4" / "frame_000001_heatmap.bin"));

  REQUIRE(run_cli({"render", "--input",
                   (dir / "heat1" / "frame_000001_heatmap.bin").string(),
                   "--output", (dir / "heat.pgm").string(), "--class-index",
                   "1"}) == 0);
  CHECK(file_bytes(dir / "heat.pgm").starts_with("P5\n"));
}

TEST_CASE("the config env var supplies the default config path") {
  const fs::path dir = test_dir("cli_env");
  write_text(dir / "env_config.json", R"({"scene": {"n_frames": 1, "cars": 1,
      "truck_trailer_pairs": 0, "pedestrians": 0, "cyclists": 0}})");
  ::setenv(kConfigEnvVar, (dir / "env_config.json").c_str(), 1);
  REQUIRE(run_cli({"gen-scene", "--output", (dir / "scene").string(), "--seed",
                   "2"}) == 0);
  ::unsetenv(kConfigEnvVar);
  const auto records = read_frame_records(dir / "scene" / "frames.jsonl");
  CHECK(records.size() == 1);  // the env config trimmed the scene
  CHECK(records[0].labels.size() == 1);
}

TEST_CASE("frame files with duplicate object ids are rejected") {
  const fs::path dir = test_dir("dup_ids");
  FrameRecord rec;
  rec.frame_id = 0;
  rec.point_blob = "x.bin";
  rec.labels.push_back(FrameLabel{5, "car", std::nullopt, Box7(0, 0, 1, 2, 4, 2, 0)});
  rec.labels.push_back(FrameLabel{5, "car", std::nullopt, Box7(9, 9, 1, 2, 4, 2, 0)});
  write_frame_records(dir / "frames.jsonl", {rec});
  CHECK_THROWS_AS(read_frame_records(dir / "frames.jsonl"), IoError);
}
