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

#include "voxsel/stage_vlmue.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "json.hpp"

#include "voxsel/error.hpp"

namespace voxsel::stage2 {

ClassId voxel_majority(const LogitEnsemble& ensemble, const Voxel& voxel) {
  std::vector<std::size_t> hist(ensemble.num_classes(), 0);
  for (PointIndex k : voxel.point_indices) ++hist[ensemble.hypothetical_labels.at(k)];
  std::size_t best = 0;
  for (std::size_t c = 1; c < hist.size(); ++c) {
    if (hist[c] > hist[best]) best = c;
  }
  return static_cast<ClassId>(best);
}

double uncertainty_score(const LogitEnsemble& ensemble, const Voxel& voxel,
                         ClassId majority) {
  if (voxel.point_indices.empty()) return 0.0;
  if (majority >= ensemble.num_classes()) {
    throw DomainError("class " + std::to_string(majority) + " is outside the ensemble");
  }
  double acc = 0.0;
  for (PointIndex k : voxel.point_indices) acc += ensemble.mean_logits(k, majority);
  return acc / static_cast<double>(voxel.point_indices.size());
}

VoxelUncertainty score_voxel(const LogitEnsemble& ensemble, const Voxel& voxel) {
  const ClassId majority = voxel_majority(ensemble, voxel);
  return {voxel.coord, majority, uncertainty_score(ensemble, voxel, majority)};
}

std::vector<VoxelCoord> select_stage2(std::span<const VoxelUncertainty> candidates,
                                      std::size_t k) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (candidates[a].score != candidates[b].score) {
                        return candidates[a].score < candidates[b].score;
                      }
                      return candidates[a].coord < candidates[b].coord;
                    });
  std::vector<VoxelCoord> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(candidates[order[i]].coord);
  return out;
}

void write_scores(std::ostream& os, std::span<const VoxelUncertainty> scores) {
  for (const auto& s : scores) {
    nlohmann::json rec;
    rec["coord"] = {s.coord.x, s.coord.y, s.coord.z};
    rec["majority"] = s.majority_label;
    rec["score"] = s.score;
    os << rec.dump() << '\n';
  }
}

}  // namespace voxsel::stage2
