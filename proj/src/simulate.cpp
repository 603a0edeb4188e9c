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

#include "voxsel/simulate.hpp"

#include <utility>

#include "voxsel/random.hpp"

namespace voxsel {

void SimulationConfig::seed_all(std::uint64_t seed) {
  scenes.seed = mix_seed(seed, 1);
  feature_seed = mix_seed(seed, 2);
  model.seed = mix_seed(seed, 3);
  al.method.seed = mix_seed(seed, 4);
  al.init_seed = mix_seed(seed, 5);
}

std::vector<CloudData> prepare_clouds(std::vector<PointCloud> clouds,
                                      const VoxelGridConfig& grid,
                                      const FeatureProvider& features, unsigned threads) {
  grid.validate();
  std::vector<CloudData> out(clouds.size());
  parallel_for(clouds.size(), threads, [&](std::size_t i) {
    out[i].grid = build_grid(clouds[i], grid);
    out[i].features = features.features(clouds[i]);
    out[i].cloud = std::move(clouds[i]);
  });
  return out;
}

SimulationResult run_active_learning(std::vector<CloudData> train,
                                     std::span<const CloudData> heldout,
                                     std::size_t num_classes, const ModelConfig& model,
                                     const ALConfig& al) {
  ActiveLearner learner(std::move(train), num_classes, model, al);
  SimulationResult result;
  result.method = std::string(method_name(al.method.kind));
  result.budget = al.budget;
  result.rounds.push_back(learner.initialize());
  while (!learner.finished()) result.rounds.push_back(learner.run_round());
  result.metrics = learner.evaluate(heldout);
  result.status = learner.status();
  result.rounds_completed = learner.rounds_completed();
  result.total_labeled = learner.annotated_points();
  return result;
}

SimulationResult run_simulation(const SimulationConfig& config) {
  const MockFeatureProvider features(config.model.feature_dim, config.feature_seed,
                                     config.coord_scale);
  auto train = prepare_clouds(generate_scenes(config.scenes), config.grid, features,
                              config.al.threads);
  auto heldout = prepare_clouds(
      generate_scenes(config.scenes, config.scenes.num_clouds, config.eval_clouds), config.grid,
      features, config.al.threads);
  return run_active_learning(std::move(train), heldout, config.scenes.frequencies().size(),
                             config.model, config.al);
}

}  // namespace voxsel
