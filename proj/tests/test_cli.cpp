// Copyright 2026 The voxsel Authors.
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

#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "voxsel/acquisition.hpp"
#include "voxsel/io.hpp"
#include "voxsel/random.hpp"
#include "voxsel/scene_gen.hpp"
#include "voxsel/voxel_grid.hpp"

using namespace voxsel;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "voxsel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text) {
  std::istringstream in(text);
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

// Writes a scan and its labels; returns {cloud, labels} paths.
std::pair<std::string, std::string> write_scan(const testing::TempDir& dir, const std::string& stem,
                                               const PointCloud& cloud) {
  const auto bin = (dir / (stem + ".bin")).string();
  const auto lab = (dir / (stem + ".label")).string();
  io::write_cloud_bin(bin, cloud.points);
  std::vector<std::uint32_t> raw(cloud.labels->begin(), cloud.labels->end());
  io::write_labels(lab, raw);
  return {bin, lab};
}

PointCloud scene(std::uint64_t seed) {
  SceneGenConfig cfg;
  cfg.num_clouds = 1;
  cfg.seed = seed;
  return generate_scenes(cfg).front();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("voxelize two far points") {
  testing::TempDir dir;
  const auto bin = (dir / "two.bin").string();
  const std::vector<Point> pts = {{0.1f, 0.1f, 0.1f, 0.f}, {5.f, 5.f, 5.f, 1.f}};
  io::write_cloud_bin(bin, pts);
  const auto r = run({"voxelize", "--cloud", bin});
  CHECK(r.code == 0);
  const auto recs = lines(r.out);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["points"] == 1);
  CHECK_FALSE(recs[0].contains("distinct_labels"));

  const auto summary = (dir / "s.jsonl").string();
  const auto r2 = run({"voxelize", "--cloud", bin, "--out", summary});
  CHECK(r2.code == 0);
  CHECK(r2.out.find("voxels: 2") != std::string::npos);
  std::ifstream in(summary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == r.out);
}

TEST_CASE("voxelize matches the library grid") {
  testing::TempDir dir;
  const auto cloud = scene(4);
  const auto [bin, lab] = write_scan(dir, "s", cloud);
  for (double lambda : {0.05, 0.25, 0.5}) {
    std::ostringstream l;
    l << lambda;
    const auto r = run({"voxelize", "--cloud", bin, "--labels", lab, "--lambda", l.str()});
    REQUIRE(r.code == 0);
    const auto grid = build_grid(io::read_cloud_bin(bin), lambda, 0.05);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == grid.size());
    for (std::size_t v = 0; v < grid.size(); ++v) {
      const auto& c = grid.voxel(v).coord;
      CHECK(recs[v]["coord"] == json::array({c.x, c.y, c.z}));
      CHECK(recs[v]["points"] == grid.voxel(v).point_indices.size());
    }
  }
}

TEST_CASE("missing input names the path and exits 2") {
  const auto r = run({"voxelize", "--cloud", "/nonexistent/scan.bin"});
  CHECK(r.code == 2);
  CHECK(r.err.find("/nonexistent/scan.bin") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("usage errors exit 2 and help exits 0") {
  CHECK(run({}).code == 2);
  CHECK(run({"voxelize"}).code == 2);
  CHECK(run({"select", "--cloud", "x", "--method", "bogus"}).code == 2);
  const auto h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("simulate") != std::string::npos);
  const auto sh = run({"select", "--help"});
  CHECK(sh.code == 0);
  CHECK(sh.out.find("--lambda1") != std::string::npos);
}

TEST_CASE("bad label file is rejected") {
  testing::TempDir dir;
  const auto cloud = scene(1);
  auto [bin, lab] = write_scan(dir, "s", cloud);
  std::ofstream(lab, std::ios::binary | std::ios::trunc) << "abc";
  const auto r = run({"voxelize", "--cloud", bin, "--labels", lab});
  CHECK(r.code == 2);
  CHECK(r.err.find(lab) != std::string::npos);
}

TEST_CASE("select random is reproducible") {
  testing::TempDir dir;
  const auto [bin, lab] = write_scan(dir, "s", scene(2));
  const std::vector<std::string> args = {"select", "--cloud", bin, "--labels", lab,
                                         "--mock-model", "--classes", "3", "--method",
                                         "random", "--nq", "5", "--seed", "11"};
  const auto a = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == run(args).out);
  const auto recs = lines(a.out);
  REQUIRE(recs.size() == 6);
  CHECK(recs[0]["type"] == "selection");
  CHECK(recs[0]["count"] == 5);
  auto other = args;
  other.back() = "12";
  CHECK_FALSE(run(other).out == a.out);
}

TEST_CASE("select on a one-voxel cloud returns that voxel") {
  testing::TempDir dir;
  PointCloud cloud = testing::strip_cloud({6});
  cloud.labels = std::vector<ClassId>(6, 0);
  const auto [bin, lab] = write_scan(dir, "one", cloud);
  Matrix f(6, 4, std::vector<float>(24, 0.5f));
  Matrix lg(6, 2, std::vector<float>(12, 0.f));
  io::write_matrix(dir / "f.mat", f);
  io::write_matrix(dir / "l.mat", lg);
  for (const char* method : {"select", "random", "entropy", "margin", "vcd"}) {
    const auto r = run({"select", "--cloud", bin, "--features", (dir / "f.mat").string(),
                        "--logits", (dir / "l.mat").string(), "--lambda", "1", "--method",
                        method, "--lambda1", "1", "--lambda2", "1"});
    REQUIRE(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 2);
    CHECK(recs[1]["coord"] == json::array({0, 0, 0}));
    CHECK(recs[1]["points"].size() == 6);
  }
}

TEST_CASE("select over a fixture equals the library pipeline") {
  testing::TempDir dir;
  std::vector<std::size_t> sizes(12);
  for (std::size_t j = 0; j < 12; ++j) sizes[j] = 2 + j % 4;
  PointCloud cloud = testing::strip_cloud(sizes);
  std::mt19937_64 rng(5);
  std::vector<ClassId> labels(cloud.size());
  for (auto& l : labels) l = static_cast<ClassId>(rng() % 4);
  cloud.labels = labels;
  const auto [bin, lab] = write_scan(dir, "fx", cloud);
  const Matrix features = testing::random_matrix(cloud.size(), 6, 1, -1, 1);
  std::vector<Matrix> passes;
  std::vector<std::string> args = {"select", "--cloud", bin, "--labels", lab,
                                   "--features", (dir / "f.mat").string(),
                                   "--lambda", "1", "--dedup-lambda", "0.01",
                                   "--lambda1", "6", "--lambda2", "3", "--lambda3", "2",
                                   "--labeled-coords", (dir / "lab.txt").string()};
  io::write_matrix(dir / "f.mat", features);
  for (int t = 0; t < 3; ++t) {
    passes.push_back(testing::random_matrix(cloud.size(), 4, 10 + t, -3, 3));
    const auto p = dir / ("l" + std::to_string(t) + ".mat");
    io::write_matrix(p, passes.back());
    args.push_back("--logits");
    args.push_back(p.string());
  }
  const auto grid = build_grid(cloud, 1.0, 0.01);
  std::ofstream(dir / "lab.txt") << grid.voxel(0).coord.x << ' ' << grid.voxel(0).coord.y << " 0\n";

  const auto r = run(args);
  REQUIRE(r.code == 0);
  const auto recs = lines(r.out);

  LabelLedger ledger(4, std::numeric_limits<std::uint64_t>::max());
  for (auto k : grid.voxel(0).cell_indices) ledger.add(labels[k]);
  std::vector<VoxelCoord> pool;
  for (std::size_t v = 1; v < grid.size(); ++v) pool.push_back(grid.voxel(v).coord);
  const auto ensemble = make_ensemble(passes);
  SelectionConfig sel;
  sel.lambda1 = 6;
  sel.lambda2 = 3;
  sel.lambda3 = 2;
  const AcquisitionInputs in{grid, features, ensemble, ledger, pool};
  const auto expect = select_pipeline(in, sel, mix_seed(0, 4));
  REQUIRE(recs.size() == 3);
  CHECK(recs[0]["pool"] == 11);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(recs[1 + i]["coord"] == json(std::vector<std::int32_t>{expect[i].x, expect[i].y,
                                                                 expect[i].z}));
  }

  // per-stage scores are dumped when requested
  args.push_back("--dump-scores");
  args.push_back((dir / "dump.jsonl").string());
  REQUIRE(run(args).code == 0);
  std::ifstream din(dir / "dump.jsonl");
  std::stringstream ss;
  ss << din.rdbuf();
  const auto dump = lines(ss.str());
  CHECK(dump.size() >= 11 + 6 + 2);
}

TEST_CASE("select rejects inconsistent inputs") {
  testing::TempDir dir;
  PointCloud cloud = testing::strip_cloud({3, 3});
  cloud.labels = std::vector<ClassId>(6, 0);
  const auto [bin, lab] = write_scan(dir, "c", cloud);
  io::write_matrix(dir / "f.mat", Matrix(5, 4));
  io::write_matrix(dir / "l.mat", Matrix(6, 3));
  io::write_matrix(dir / "l2.mat", Matrix(6, 2));
  io::write_matrix(dir / "f6.mat", Matrix(6, 4));
  const std::string f5 = (dir / "f.mat").string(), f6 = (dir / "f6.mat").string();
  const std::string l = (dir / "l.mat").string(), l2 = (dir / "l2.mat").string();
  CHECK(run({"select", "--cloud", bin, "--features", f5, "--logits", l}).code == 2);
  CHECK(run({"select", "--cloud", bin, "--features", f6, "--logits", l, "--logits", l2}).code ==
        2);
  CHECK(run({"select", "--cloud", bin, "--features", f6}).code == 2);
  CHECK(run({"select", "--cloud", bin, "--mock-model"}).code == 2);
  std::ofstream(dir / "bad.txt") << "9 9 9\n";
  const auto r = run({"select", "--cloud", bin, "--features", f6, "--logits", l,
                      "--labeled-coords", (dir / "bad.txt").string(), "--lambda", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("not in the cloud") != std::string::npos);
  CHECK(run({"select", "--cloud", bin, "--labels", lab, "--features", f6, "--logits", l,
             "--classes", "0"})
            .code == 0);
}

TEST_CASE("simulate") {
  const std::vector<std::string> base = {"simulate", "--num-clouds", "3", "--seed", "4"};
  SUBCASE("rounds zero") {
    auto args = base;
    args.insert(args.end(), {"--rounds", "0"});
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 2);
    CHECK(recs[1]["rounds_completed"] == 0);
    CHECK(recs[1]["status"] == "completed");
  }
  SUBCASE("deterministic across runs and threads") {
    const auto a = run(base);
    REQUIRE(a.code == 0);
    CHECK(a.out == run(base).out);
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(a.out == run(threaded).out);
    auto scalar = base;
    scalar.insert(scalar.begin(), {"--kernel", "scalar"});
    CHECK(a.out == run(scalar).out);
  }
  SUBCASE("budget exhausted mid-run still succeeds") {
    auto args = base;
    args.insert(args.end(), {"--budget", "120", "--rounds", "50"});
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const auto recs = lines(r.out);
    CHECK(recs.back()["status"] == "budget_exhausted");
    CHECK(recs.back()["total_labeled"].get<int>() <= 120);
  }
  SUBCASE("budget below initialization cost fails") {
    auto args = base;
    args.insert(args.end(), {"--budget", "1"});
    const auto r = run(args);
    CHECK(r.code == 2);
    CHECK(r.err.find("budget") != std::string::npos);
  }
  SUBCASE("invalid parameters exit 2") {
    auto args = base;
    args.insert(args.end(), {"--frequencies", "0.5,0.6"});
    CHECK(run(args).code == 2);
  }
  SUBCASE("real scans") {
    testing::TempDir dir;
    const auto [b1, l1] = write_scan(dir, "a", scene(1));
    const auto [b2, l2] = write_scan(dir, "b", scene(2));
    const auto r = run({"simulate", "--cloud", b1, "--labels", l1, "--cloud", b2, "--labels",
                        l2, "--classes", "3", "--rounds", "2", "--method", "entropy"});
    REQUIRE(r.code == 0);
    const auto recs = lines(r.out);
    CHECK(recs.size() == 4);
    CHECK(recs.back()["method"] == "entropy");
  }
}

TEST_CASE("config file sets options and flags win") {
  testing::TempDir dir;
  const auto ini = (dir / "run.ini").string();
  std::ofstream(ini) << "[simulate]\nnum-clouds = 2\nrounds = 1\nseed = 9\nmethod = random\n";
  const auto r = run({"--config", ini, "simulate"});
  REQUIRE(r.code == 0);
  auto recs = lines(r.out);
  CHECK(recs.back()["method"] == "random");
  CHECK(recs.size() == 3);
  CHECK(r.out == run({"simulate", "--num-clouds", "2", "--rounds", "1", "--seed", "9",
                      "--method", "random"})
                     .out);
  const auto o = run({"--config", ini, "simulate", "--rounds", "2"});
  REQUIRE(o.code == 0);
  CHECK(lines(o.out).size() == 4);
}

TEST_CASE("stats") {
  testing::TempDir dir;
  SUBCASE("single class has zero entropy") {
    PointCloud c = testing::strip_cloud({4, 4});
    c.labels = std::vector<ClassId>(8, 1);
    const auto [bin, lab] = write_scan(dir, "one", c);
    const auto r = run({"stats", "--cloud", bin, "--labels", lab, "--classes", "3"});
    REQUIRE(r.code == 0);
    const auto s = lines(r.out).at(0);
    CHECK(s["class_counts"] == json::array({0, 8, 0}));
    CHECK(s["class_entropy"].get<double>() == 0.0);
    CHECK(s["per_lambda"].size() == 4);
  }
  SUBCASE("even split has entropy ln 2") {
    PointCloud c = testing::strip_cloud({4, 4});
    c.labels = std::vector<ClassId>{0, 1, 0, 1, 0, 1, 0, 1};
    const auto [bin, lab] = write_scan(dir, "two", c);
    const auto r = run({"stats", "--cloud", bin, "--labels", lab, "--classes", "2",
                        "--lambda", "1", "--dedup-lambda", "0.01"});
    REQUIRE(r.code == 0);
    const auto s = lines(r.out).at(0);
    CHECK(std::abs(s["class_entropy"].get<double>() - std::log(2.0)) < 1e-12);
    CHECK(s["per_lambda"][0]["voxels"] == 2);
    CHECK(s["per_lambda"][0]["multi_class_fraction"] == 1.0);
  }
  SUBCASE("counts match generated scenes") {
    const auto a = scene(7), b = scene(8);
    const auto [b1, l1] = write_scan(dir, "a", a);
    const auto [b2, l2] = write_scan(dir, "b", b);
    const auto r = run({"stats", "--cloud", b1, "--labels", l1, "--cloud", b2, "--labels", l2,
                        "--classes", "3"});
    REQUIRE(r.code == 0);
    std::vector<std::uint64_t> counts(3, 0);
    for (auto l : *a.labels) ++counts[l];
    for (auto l : *b.labels) ++counts[l];
    const auto s = lines(r.out).at(0);
    CHECK(s["class_counts"].get<std::vector<std::uint64_t>>() == counts);
    CHECK(s["points"] == a.size() + b.size());
  }
  SUBCASE("label out of range") {
    PointCloud c = testing::strip_cloud({2});
    c.labels = std::vector<ClassId>{0, 5};
    const auto [bin, lab] = write_scan(dir, "bad", c);
    CHECK(run({"stats", "--cloud", bin, "--labels", lab, "--classes", "3"}).code == 2);
  }
  SUBCASE("unwritable output") {
    PointCloud c = testing::strip_cloud({2});
    c.labels = std::vector<ClassId>{0, 0};
    const auto [bin, lab] = write_scan(dir, "w", c);
    const auto r = run({"stats", "--cloud", bin, "--labels", lab, "--classes", "1", "--out",
                        "/nonexistent/dir/out.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("/nonexistent/dir/out.json") != std::string::npos);
  }
}

}  // TEST_SUITE
