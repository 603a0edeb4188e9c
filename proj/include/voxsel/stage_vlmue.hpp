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

// Stage 2: voxel-level uncertainty from averaged dropout logits. A voxel's
// score is the mean over its points of the averaged logit of the voxel's
// majority hypothetical class. Lower means less confident.

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "voxsel/types.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel::stage2 {

struct VoxelUncertainty {
  VoxelCoord coord;
  ClassId majority_label = 0;
  double score = 0.0;
};

// Most frequent hypothetical label among the voxel's points, smallest class
// on ties.
ClassId voxel_majority(const LogitEnsemble& ensemble, const Voxel& voxel);
double uncertainty_score(const LogitEnsemble& ensemble, const Voxel& voxel,
                         ClassId majority);
VoxelUncertainty score_voxel(const LogitEnsemble& ensemble, const Voxel& voxel);

// Lowest min(k, pool) scores, ascending; ties by coordinate.
std::vector<VoxelCoord> select_stage2(std::span<const VoxelUncertainty> candidates,
                                      std::size_t k);

void write_scores(std::ostream& os, std::span<const VoxelUncertainty> scores);

}  // namespace voxsel::stage2
