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

#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "voxsel/acquisition.hpp"
#include "voxsel/error.hpp"
#include "voxsel/io.hpp"
#include "voxsel/kernels.hpp"
#include "voxsel/metrics.hpp"
#include "voxsel/model.hpp"
#include "voxsel/random.hpp"
#include "voxsel/report.hpp"
#include "voxsel/simulate.hpp"
#include "voxsel/stage_smpcb.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel::cli {
namespace {

using nlohmann::json;

// Options shared by several subcommands.
struct GridArgs {
  double lambda = 0.25;
  double lambda_train = 0.05;
  std::optional<double> dedup;

  VoxelGridConfig config() const {
    VoxelGridConfig c;
    c.lambda_select = lambda;
    c.lambda_train = lambda_train;
    c.dedup_lambda = dedup;
    return c;
  }
};

struct SelectionArgs {
  std::size_t lambda1 = 200;
  std::size_t lambda2 = 5;
  std::size_t lambda3 = 1;
  std::string method = "select";
  std::string stages = "123";
  std::string variance = "dims";
  std::string balance = "softmax";
  std::string entropy_agg = "mean";

  SelectionConfig config() const {
    SelectionConfig s;
    s.lambda1 = lambda1;
    s.lambda2 = lambda2;
    s.lambda3 = lambda3;
    s.stages.representative = stages.find('1') != std::string::npos;
    s.stages.uncertainty = stages.find('2') != std::string::npos;
    s.stages.balance = stages.find('3') != std::string::npos;
    s.variance = variance == "points" ? stage1::VarianceMode::kAcrossPoints
                                      : stage1::VarianceMode::kAcrossDimensions;
    s.balance_entropy =
        balance == "raw" ? stage3::EntropyMode::kRawProportions : stage3::EntropyMode::kSoftmax;
    s.entropy_aggregation = entropy_agg == "max" ? baselines::EntropyAggregation::kMax
                                                 : baselines::EntropyAggregation::kMean;
    return s;
  }
};

struct ModelArgs {
  std::size_t passes = 5;
  double dropout = 0.1;
  std::size_t feature_dim = 16;
  double coord_scale = MockFeatureProvider::kDefaultCoordScale;
};

void add_grid_options(CLI::App* app, GridArgs& g) {
  app->add_option("--lambda", g.lambda, "Selection voxel size in meters")->capture_default_str();
  app->add_option("--lambda-train", g.lambda_train, "Training voxel size in meters")
      ->capture_default_str();
  app->add_option("--dedup-lambda", g.dedup, "Deduplication cell size (default: lambda-train)");
}

void add_selection_options(CLI::App* app, SelectionArgs& s) {
  app->add_option("--lambda1", s.lambda1, "Stage-1 subset size")->capture_default_str();
  app->add_option("--lambda2", s.lambda2, "Stage-2 subset size")->capture_default_str();
  app->add_option("--lambda3", s.lambda3, "Stage-3 subset size")->capture_default_str();
  app->add_option("--method", s.method, "Acquisition method")
      ->check(CLI::IsMember({"select", "random", "entropy", "margin", "vcd"}))
      ->capture_default_str();
  app->add_option("--stages", s.stages, "Enabled SELECT stages, e.g. 123, 12, 0 for none")
      ->capture_default_str();
  app->add_option("--variance", s.variance, "Stage-1 variance: dims or points")
      ->check(CLI::IsMember({"dims", "points"}))
      ->capture_default_str();
  app->add_option("--balance-entropy", s.balance, "Stage-3 entropy: softmax or raw")
      ->check(CLI::IsMember({"softmax", "raw"}))
      ->capture_default_str();
  app->add_option("--entropy-agg", s.entropy_agg, "Entropy baseline voxel aggregation")
      ->check(CLI::IsMember({"mean", "max"}))
      ->capture_default_str();
}

void add_model_options(CLI::App* app, ModelArgs& m) {
  app->add_option("--passes", m.passes, "MC-dropout passes T")->capture_default_str();
  app->add_option("--dropout", m.dropout, "Dropout rate p")->capture_default_str();
  app->add_option("--feature-dim", m.feature_dim, "Mock feature dimension D")
      ->capture_default_str();
  app->add_option("--coord-scale", m.coord_scale, "Mock feature coordinate scale (m)")
      ->capture_default_str();
}

// Writes to --out when given, else to the command's stdout.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

PointCloud load_cloud(const std::string& cloud_path, const std::string& label_path,
                      bool mask_low16) {
  PointCloud cloud = io::read_cloud_bin(cloud_path);
  if (!label_path.empty()) io::attach_labels(cloud, io::read_labels(label_path, mask_low16));
  return cloud;
}

std::vector<PointCloud> load_clouds(const std::vector<std::string>& clouds,
                                    const std::vector<std::string>& labels, bool mask_low16) {
  if (labels.size() != clouds.size()) {
    throw ConsistencyError("got " + std::to_string(clouds.size()) + " clouds but " +
                           std::to_string(labels.size()) + " label files");
  }
  std::vector<PointCloud> out;
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    out.push_back(load_cloud(clouds[i], labels[i], mask_low16));
  }
  return out;
}

std::vector<VoxelCoord> read_coord_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<VoxelCoord> out;
  std::int64_t x, y, z;
  while (in >> x >> y >> z) {
    out.push_back({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y),
                   static_cast<std::int32_t>(z)});
  }
  if (!in.eof()) throw FormatError(path + ": expected whitespace-separated integer triples");
  return out;
}

// ---------------------------------------------------------------------------
// voxelize

struct VoxelizeArgs {
  std::string cloud;
  std::string labels;
  bool keep_high_bits = false;
  GridArgs grid;
  std::string out;
};

void cmd_voxelize(const VoxelizeArgs& a, std::ostream& out) {
  const PointCloud cloud = load_cloud(a.cloud, a.labels, !a.keep_high_bits);
  const VoxelGrid grid = build_grid(cloud, a.grid.config());
  Output dest(a.out, out);
  std::optional<std::span<const ClassId>> labels;
  if (cloud.labels) labels = std::span<const ClassId>(*cloud.labels);
  write_grid_summary(dest.stream(), grid, labels);
  if (!a.out.empty()) {
    out << "voxels: " << grid.size() << '\n';
    if (labels && !grid.empty()) {
      out << "multi_class_fraction: " << multi_class_fraction(grid, *labels) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  std::string cloud;
  std::string labels;
  bool keep_high_bits = false;
  std::string features;
  std::vector<std::string> logits;
  bool mock_model = false;
  std::string labeled_coords;
  std::size_t classes = 0;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  GridArgs grid;
  SelectionArgs selection;
  ModelArgs model;
  std::string dump;
  std::string out;
};

void cmd_select(const SelectArgs& a, std::ostream& out) {
  PointCloud cloud = load_cloud(a.cloud, a.labels, !a.keep_high_bits);
  const VoxelGrid grid = build_grid(cloud, a.grid.config());

  std::vector<VoxelCoord> labeled;
  if (!a.labeled_coords.empty()) labeled = read_coord_list(a.labeled_coords);

  FeatureMatrix features;
  LogitEnsemble ensemble;
  std::size_t classes = a.classes;
  if (a.mock_model) {
    if (!cloud.labels || classes == 0) {
      throw ConsistencyError("--mock-model needs --labels and --classes");
    }
    if (a.labeled_coords.empty() && !grid.empty()) {
      auto rng = make_rng(a.seed, 0x1417);
      std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
      labeled.push_back(grid.voxel(pick(rng)).coord);
    }
    features = MockFeatureProvider(a.model.feature_dim, mix_seed(a.seed, 2), a.model.coord_scale)
                   .features(cloud);
  } else {
    if (a.features.empty() || a.logits.empty()) {
      throw ConsistencyError("select needs --features and --logits, or --mock-model");
    }
    features = FileFeatureProvider(a.features).features(cloud);
    if (classes == 0) classes = io::read_matrix(a.logits.front()).cols();
    std::vector<std::filesystem::path> paths(a.logits.begin(), a.logits.end());
    ensemble = load_logit_passes(paths, cloud.size(), classes);
  }
  if (cloud.labels) cloud.validate(classes);

  LabelLedger ledger(classes, std::numeric_limits<std::uint64_t>::max());
  std::vector<bool> is_labeled(grid.size(), false);
  std::vector<PointIndex> labeled_points;
  for (const auto& c : labeled) {
    const auto found = grid.index_of(c);
    if (!found) {
      std::ostringstream msg;
      msg << "labeled voxel " << c << " is not in the cloud";
      throw ConsistencyError(msg.str());
    }
    const std::size_t v = *found;
    if (is_labeled[v]) continue;
    is_labeled[v] = true;
    const auto& cell = grid.voxel(v).cell_indices;
    labeled_points.insert(labeled_points.end(), cell.begin(), cell.end());
    if (cloud.labels) {
      for (PointIndex k : cell) ledger.add((*cloud.labels)[k]);
    }
  }

  if (a.mock_model) {
    const PrototypeModel model = fit_prototypes(features, labeled_points, *cloud.labels, classes);
    ModelConfig mc;
    mc.passes = a.model.passes;
    mc.dropout = a.model.dropout;
    mc.feature_dim = a.model.feature_dim;
    mc.seed = mix_seed(a.seed, 3);
    ensemble = mc_forward(model, features, mc);
  }

  std::vector<VoxelCoord> pool;
  for (std::size_t v = 0; v < grid.size(); ++v) {
    if (!is_labeled[v]) pool.push_back(grid.voxel(v).coord);
  }

  const SelectionConfig selection = a.selection.config();
  const AcquisitionMethod method{parse_method(a.selection.method), mix_seed(a.seed, 4)};
  SelectTrace trace;
  const AcquisitionInputs in{grid, features, ensemble, ledger, pool};
  const auto chosen = rank_candidates(in, method, selection, a.n, &trace);

  Output dest(a.out, out);
  json header;
  header["type"] = "selection";
  header["cloud"] = cloud.cloud_id;
  header["method"] = method_name(method.kind);
  header["pool"] = pool.size();
  header["count"] = chosen.size();
  dest.stream() << header.dump() << '\n';
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const Voxel& v = grid.at(chosen[i]);
    json rec;
    rec["type"] = "voxel";
    rec["rank"] = i;
    rec["coord"] = report::to_json(v.coord);
    rec["points"] = v.cell_indices;
    dest.stream() << rec.dump() << '\n';
  }

  if (!a.dump.empty() && method.kind == MethodKind::kSelect) {
    std::ofstream dump(a.dump, std::ios::trunc);
    if (!dump) throw IoError("cannot open '" + a.dump + "' for writing");
    stage1::write_scores(dump, trace.stage1_scores);
    stage2::write_scores(dump, trace.stage2_scores);
    stage3::write_steps(dump, trace.stage3, trace.stage3_candidates);
  }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  SimulationConfig sim;
  GridArgs grid;
  SelectionArgs selection;
  ModelArgs model;
  std::uint64_t seed = 0;
  std::vector<std::string> clouds;
  std::vector<std::string> labels;
  std::vector<std::string> eval_clouds;
  std::vector<std::string> eval_labels;
  bool keep_high_bits = false;
  std::string out;
};

void cmd_simulate(SimulateArgs a, std::ostream& out) {
  SimulationConfig& sim = a.sim;
  sim.grid = a.grid.config();
  sim.al.selection = a.selection.config();
  sim.al.method.kind = parse_method(a.selection.method);
  sim.model.passes = a.model.passes;
  sim.model.dropout = a.model.dropout;
  sim.model.feature_dim = a.model.feature_dim;
  sim.coord_scale = a.model.coord_scale;
  sim.seed_all(a.seed);

  SimulationResult result;
  if (a.clouds.empty()) {
    result = run_simulation(sim);
  } else {
    if (sim.scenes.num_classes < 1) throw DomainError("--classes is required with --cloud");
    const MockFeatureProvider features(sim.model.feature_dim, sim.feature_seed, sim.coord_scale);
    auto train = prepare_clouds(load_clouds(a.clouds, a.labels, !a.keep_high_bits), sim.grid,
                                features, sim.al.threads);
    std::vector<CloudData> heldout;
    if (a.eval_clouds.empty()) {
      for (const auto& c : train) heldout.push_back(c);
    } else {
      heldout = prepare_clouds(load_clouds(a.eval_clouds, a.eval_labels, !a.keep_high_bits),
                               sim.grid, features, sim.al.threads);
    }
    result = run_active_learning(std::move(train), heldout, sim.scenes.num_classes, sim.model,
                                 sim.al);
  }
  Output dest(a.out, out);
  report::write_simulation(dest.stream(), result);
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::vector<std::string> clouds;
  std::vector<std::string> labels;
  std::size_t classes = 0;
  bool keep_high_bits = false;
  std::vector<double> lambdas = {0.05, 0.25, 0.5, 0.75};
  std::optional<double> dedup;
  std::string out;
};

void cmd_stats(const StatsArgs& a, std::ostream& out) {
  const auto clouds = load_clouds(a.clouds, a.labels, !a.keep_high_bits);
  std::vector<std::uint64_t> counts(a.classes, 0);
  std::uint64_t points = 0;
  for (const auto& c : clouds) {
    c.validate(a.classes);
    for (ClassId l : *c.labels) ++counts[l];
    points += c.size();
  }
  json rec;
  rec["type"] = "stats";
  rec["clouds"] = clouds.size();
  rec["points"] = points;
  rec["class_counts"] = counts;
  rec["class_entropy"] = points > 0 ? metrics::distribution_entropy(counts) : 0.0;
  auto per_lambda = json::array();
  for (double lambda : a.lambdas) {
    std::uint64_t voxels = 0;
    std::uint64_t multi = 0;
    for (const auto& c : clouds) {
      const VoxelGrid grid = build_grid(c, lambda, std::min(lambda, a.dedup.value_or(lambda)));
      voxels += grid.size();
      for (const auto& v : grid.voxels()) multi += distinct_labels(v, *c.labels) >= 2;
    }
    json entry;
    entry["lambda"] = lambda;
    entry["voxels"] = voxels;
    entry["multi_class_voxels"] = multi;
    entry["multi_class_fraction"] =
        voxels > 0 ? json(static_cast<double>(multi) / static_cast<double>(voxels)) : json(nullptr);
    per_lambda.push_back(entry);
  }
  rec["per_lambda"] = per_lambda;
  Output dest(a.out, out);
  dest.stream() << rec.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Budgeted voxel selection for LiDAR annotation"};
  app.set_config("--config", "", "Flat key = value configuration file; flags override it");
  app.require_subcommand(1);
  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "Kernel ISA: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();

  VoxelizeArgs vox;
  auto* voxelize = app.add_subcommand("voxelize", "Voxelize a scan and summarize its cells");
  voxelize->add_option("--cloud", vox.cloud, "Scan file")->required();
  voxelize->add_option("--labels", vox.labels, "Label file");
  voxelize->add_flag("--keep-high-bits", vox.keep_high_bits, "Do not mask labels to 16 bits");
  add_grid_options(voxelize, vox.grid);
  voxelize->add_option("--out", vox.out, "Summary output (default stdout)");

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "Select voxels to annotate in one scan");
  select->add_option("--cloud", sel.cloud, "Scan file")->required();
  select->add_option("--labels", sel.labels, "Label file");
  select->add_flag("--keep-high-bits", sel.keep_high_bits, "Do not mask labels to 16 bits");
  select->add_option("--features", sel.features, "SELMATv1 feature matrix");
  select->add_option("--logits", sel.logits, "SELMATv1 logits, one file per pass, in order");
  select->add_flag("--mock-model", sel.mock_model, "Use the built-in prototype model");
  select->add_option("--labeled-coords", sel.labeled_coords,
                     "Already labeled voxels, one 'x y z' triple per line");
  select->add_option("--classes", sel.classes, "Number of classes C");
  select->add_option("--nq,--n", sel.n, "Voxels requested from a baseline")->capture_default_str();
  select->add_option("--seed", sel.seed, "Random seed")->capture_default_str();
  select->add_option("--dump-scores", sel.dump, "Write per-stage scores here");
  add_grid_options(select, sel.grid);
  add_selection_options(select, sel.selection);
  add_model_options(select, sel.model);
  select->add_option("--out", sel.out, "Selection output (default stdout)");

  SimulateArgs simargs;
  auto& sc = simargs.sim.scenes;
  auto* simulate = app.add_subcommand("simulate", "Run the active-learning loop");
  simulate->add_option("--num-clouds", sc.num_clouds, "Generated training clouds")
      ->capture_default_str();
  simulate->add_option("--eval-clouds", simargs.sim.eval_clouds, "Generated held-out clouds")
      ->capture_default_str();
  simulate->add_option("--clusters", sc.clusters_per_cloud, "Clusters per cloud")
      ->capture_default_str();
  simulate->add_option("--points-per-cluster", sc.points_per_cluster, "Mean points per cluster")
      ->capture_default_str();
  simulate->add_option("--classes", sc.num_classes, "Number of classes C")->capture_default_str();
  simulate->add_option("--frequencies", sc.class_frequencies, "Class frequency profile")
      ->delimiter(',');
  simulate->add_option("--power-law", sc.power_law_exponent, "Power-law exponent")
      ->capture_default_str();
  simulate->add_option("--overlap", sc.boundary_overlap, "Fraction of touching clusters")
      ->capture_default_str();
  simulate->add_option("--extent", sc.extent, "Scene side length (m)")->capture_default_str();
  simulate->add_option("--rounds", simargs.sim.al.rounds, "Query rounds Q")->capture_default_str();
  simulate->add_option("--nq", simargs.sim.al.per_cloud, "Voxels per cloud per round")
      ->capture_default_str();
  simulate->add_option("--budget", simargs.sim.al.budget, "Total annotation budget (points)")
      ->capture_default_str();
  simulate->add_option("--seed", simargs.seed, "Master random seed")->capture_default_str();
  simulate->add_option("--threads", simargs.sim.al.threads, "Worker threads")
      ->capture_default_str();
  simulate->add_option("--cloud", simargs.clouds, "Real training scans instead of scenes");
  simulate->add_option("--labels", simargs.labels, "Labels for --cloud, same order");
  simulate->add_option("--eval-cloud", simargs.eval_clouds, "Held-out scans");
  simulate->add_option("--eval-labels", simargs.eval_labels, "Labels for --eval-cloud");
  simulate->add_flag("--keep-high-bits", simargs.keep_high_bits, "Do not mask labels to 16 bits");
  // Accepted for symmetry with select; simulate always uses the mock model.
  simulate->add_flag("--mock-model", "Use the built-in prototype model (always on)");
  add_grid_options(simulate, simargs.grid);
  add_selection_options(simulate, simargs.selection);
  add_model_options(simulate, simargs.model);
  simulate->add_option("--out", simargs.out, "Report output (default stdout)");

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Class and voxel statistics of labeled scans");
  stats->add_option("--cloud", st.clouds, "Scan files")->required();
  stats->add_option("--labels", st.labels, "Label files, same order")->required();
  stats->add_option("--classes", st.classes, "Number of classes C")->required();
  stats->add_flag("--keep-high-bits", st.keep_high_bits, "Do not mask labels to 16 bits");
  stats->add_option("--lambda", st.lambdas, "Voxel sizes to analyze")->delimiter(',');
  stats->add_option("--dedup-lambda", st.dedup, "Deduplication cell size (default: lambda)");
  stats->add_option("--out", st.out, "Output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (kernel == "scalar") kernels::set_active(kernels::Isa::kScalar);
    else if (kernel == "avx2") kernels::set_active(kernels::Isa::kAvx2);
    else kernels::set_active(kernels::best_available());

    if (*voxelize) cmd_voxelize(vox, out);
    else if (*select) cmd_select(sel, out);
    else if (*simulate) cmd_simulate(simargs, out);
    else if (*stats) cmd_stats(st, out);
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace voxsel::cli
