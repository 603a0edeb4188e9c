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

// Reference acquisition strategies. Each ranks the unlabeled voxels of one
// cloud and returns the first min(n, pool) of them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "voxsel/types.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel::baselines {

enum class EntropyAggregation { kMean, kMax };

// Entropy (nats) of softmax(logits).
double point_entropy(std::span<const float> logits);
// Largest minus second-largest logit. Throws DomainError with fewer than 2.
double point_margin(std::span<const float> logits);
// Entropy (nats) of the histogram of hypothetical labels in the voxel.
double label_histogram_entropy(const LogitEnsemble& ensemble, const Voxel& voxel);

double voxel_entropy_score(const LogitEnsemble& ensemble, const Voxel& voxel,
                           EntropyAggregation aggregation = EntropyAggregation::kMean);
double voxel_margin_score(const LogitEnsemble& ensemble, const Voxel& voxel);

std::vector<VoxelCoord> random_select(std::span<const VoxelCoord> pool, std::size_t n,
                                      std::uint64_t seed);
std::vector<VoxelCoord> entropy_select(const LogitEnsemble& ensemble, const VoxelGrid& grid,
                                       std::span<const VoxelCoord> pool, std::size_t n,
                                       EntropyAggregation aggregation = EntropyAggregation::kMean);
std::vector<VoxelCoord> margin_select(const LogitEnsemble& ensemble, const VoxelGrid& grid,
                                      std::span<const VoxelCoord> pool, std::size_t n);
std::vector<VoxelCoord> vcd_select(const LogitEnsemble& ensemble, const VoxelGrid& grid,
                                   std::span<const VoxelCoord> pool, std::size_t n);

}  // namespace voxsel::baselines
