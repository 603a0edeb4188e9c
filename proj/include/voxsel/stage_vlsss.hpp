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

// Stage 1: representative voxel subset selection.
//
// Each voxel is scored by g(sigma(f_V)) with g(x) = ln(1 + x), where f_V is
// the mean member feature and sigma its variance across the D dimensions.
// The objective sum_{V in S} g(sigma(f_V)) is modular, so the cardinality
// constrained maximizer is exactly the top-k voxels by gain and the greedy
// pass reduces to a partial sort.

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "voxsel/types.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel::stage1 {

enum class VarianceMode {
  kAcrossDimensions,  // variance across the dims of the mean feature
  kAcrossPoints,      // mean over dims of the variance across member points
};

struct VoxelFeature {
  VoxelCoord coord;
  std::vector<double> mean_feature;
  double sigma = 0.0;
  double gain = 0.0;
};

std::vector<double> voxel_feature(const FeatureMatrix& features, const Voxel& voxel);
double variance_score(std::span<const double> mean_feature);
double across_points_variance(const FeatureMatrix& features, const Voxel& voxel);
// Throws DomainError for negative or NaN input.
double gain(double sigma);

VoxelFeature score_voxel(const FeatureMatrix& features, const Voxel& voxel,
                         VarianceMode mode = VarianceMode::kAcrossDimensions);

// Objective value of a candidate set.
double objective(std::span<const VoxelFeature> chosen);

// Top min(k, pool) voxels by gain, descending; ties by coordinate.
std::vector<VoxelCoord> select_stage1(std::span<const VoxelFeature> pool, std::size_t k);

void write_scores(std::ostream& os, std::span<const VoxelFeature> scores);

}  // namespace voxsel::stage1
