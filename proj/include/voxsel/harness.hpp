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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxsel/acquisition.hpp"
#include "voxsel/model.hpp"
#include "voxsel/stage_smpcb.hpp"
#include "voxsel/types.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel {

struct ALConfig {
  std::size_t rounds = 5;      // Q
  std::size_t per_cloud = 1;   // N_q
  std::uint64_t budget = 6000;  // N_budget, in points
  SelectionConfig selection;
  AcquisitionMethod method;
  std::uint64_t init_seed = 0;
  unsigned threads = 1;

  // Throws DomainError unless lambda1 >= lambda2 >= lambda3 >= N_q >= 1.
  void validate() const;
};

// A cloud together with everything derived from it once.
struct CloudData {
  PointCloud cloud;  // must carry ground-truth labels
  VoxelGrid grid;
  FeatureMatrix features;
};

// Per-cloud split of voxels into labeled (D_L) and unlabeled (D_U).
class LabeledPool {
 public:
  LabeledPool() = default;
  explicit LabeledPool(std::span<const CloudData> clouds);

  std::size_t num_clouds() const { return labeled_.size(); }
  bool is_labeled(std::size_t cloud, std::size_t voxel) const { return labeled_[cloud][voxel]; }
  // Throws ConsistencyError if the voxel is labeled already.
  void label(std::size_t cloud, std::size_t voxel);

  // D_L in labeling order.
  std::span<const std::size_t> labeled_voxels(std::size_t cloud) const { return order_[cloud]; }
  std::vector<VoxelCoord> labeled_coords(std::size_t cloud) const;
  // D_U in grid order.
  std::vector<VoxelCoord> unlabeled_coords(std::size_t cloud) const;
  // Union of the cell members of D_L, ascending.
  std::vector<PointIndex> labeled_points(std::size_t cloud) const;

  // True when D_L and D_U partition the cloud's voxels exactly.
  bool is_partition(std::size_t cloud) const;

 private:
  std::span<const CloudData> clouds_;
  std::vector<std::vector<bool>> labeled_;
  std::vector<std::vector<std::size_t>> order_;
};

enum class RunStatus { kRunning, kCompleted, kBudgetExhausted };
std::string_view status_name(RunStatus s);

struct AnnotatedVoxel {
  std::size_t cloud = 0;
  VoxelCoord coord;
  std::uint64_t points = 0;  // annotation cost
  bool multi_class = false;
};

struct RoundReport {
  std::size_t round = 0;  // 0 is initialization
  RunStatus status = RunStatus::kRunning;
  std::vector<AnnotatedVoxel> annotated;
  std::size_t skipped_for_budget = 0;
  std::vector<std::uint64_t> ledger;  // ground-truth per-class counts after the round
  std::uint64_t total_labeled = 0;
  std::uint64_t budget_remaining = 0;
  std::optional<double> multi_class_fraction;  // of this round's annotated voxels
};

struct EvalMetrics {
  std::vector<std::optional<double>> class_accuracy;
  std::optional<double> macro_accuracy;
  std::vector<std::optional<double>> class_iou;
  std::optional<double> mean_iou;
  double labeled_entropy = 0.0;
  std::optional<double> selected_multi_class_fraction;  // cumulative, rounds >= 1
  std::size_t selected_voxels = 0;
  std::uint64_t evaluated_points = 0;
};

class ActiveLearner {
 public:
  ActiveLearner(std::vector<CloudData> clouds, std::size_t num_classes, ModelConfig model,
                ALConfig config);
  ActiveLearner(const ActiveLearner&) = delete;
  ActiveLearner& operator=(const ActiveLearner&) = delete;

  // Labels one uniformly random voxel per cloud. Throws BudgetExhausted, before
  // labeling anything, when the budget cannot cover it.
  RoundReport initialize();
  // Precondition: initialize() ran and !finished().
  RoundReport run_round();
  bool finished() const { return status_ != RunStatus::kRunning; }
  RunStatus status() const { return status_; }
  std::size_t rounds_completed() const { return round_; }

  // Prototype model fitted on every annotated point of every cloud.
  PrototypeModel fit_model() const;
  EvalMetrics evaluate(std::span<const CloudData> heldout) const;

  const LabelLedger& ledger() const { return ledger_; }
  const LabeledPool& pool() const { return pool_; }
  std::span<const CloudData> clouds() const { return clouds_; }
  std::size_t num_classes() const { return num_classes_; }
  const ALConfig& config() const { return config_; }
  std::uint64_t annotated_points() const;

 private:
  struct Proposal {
    std::vector<VoxelCoord> ranked;
  };
  Proposal propose(std::size_t cloud, const PrototypeModel& model) const;
  AnnotatedVoxel annotate(std::size_t cloud, std::size_t voxel);

  std::vector<CloudData> clouds_;
  std::size_t num_classes_;
  ModelConfig model_config_;
  ALConfig config_;
  LabeledPool pool_;
  LabelLedger ledger_;
  std::size_t round_ = 0;
  bool initialized_ = false;
  RunStatus status_ = RunStatus::kRunning;
  std::size_t selected_voxels_ = 0;
  std::size_t selected_multi_ = 0;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace voxsel
