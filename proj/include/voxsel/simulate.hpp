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

// End-to-end runs: build grids and features for a set of labeled clouds,
// run initialization plus up to Q rounds, evaluate on held-out clouds.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "voxsel/harness.hpp"
#include "voxsel/model.hpp"
#include "voxsel/scene_gen.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel {

struct SimulationConfig {
  SceneGenConfig scenes;
  std::size_t eval_clouds = 5;
  VoxelGridConfig grid;
  ModelConfig model;
  double coord_scale = MockFeatureProvider::kDefaultCoordScale;
  std::uint64_t feature_seed = 0;
  ALConfig al;

  // Sets every seed from one master seed.
  void seed_all(std::uint64_t seed);
};

struct SimulationResult {
  std::string method;
  std::vector<RoundReport> rounds;  // rounds[0] is initialization
  EvalMetrics metrics;
  RunStatus status = RunStatus::kRunning;
  std::size_t rounds_completed = 0;
  std::uint64_t budget = 0;
  std::uint64_t total_labeled = 0;
};

std::vector<CloudData> prepare_clouds(std::vector<PointCloud> clouds,
                                      const VoxelGridConfig& grid,
                                      const FeatureProvider& features, unsigned threads = 1);

// Drives an ActiveLearner to completion. Budget exhaustion during a round
// ends the loop normally; exhaustion during initialization throws.
SimulationResult run_active_learning(std::vector<CloudData> train,
                                     std::span<const CloudData> heldout,
                                     std::size_t num_classes, const ModelConfig& model,
                                     const ALConfig& al);

// Generates train and held-out scenes from config.scenes and runs the loop.
SimulationResult run_simulation(const SimulationConfig& config);

}  // namespace voxsel
