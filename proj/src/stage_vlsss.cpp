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

#include "voxsel/stage_vlsss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "json.hpp"

#include "voxsel/error.hpp"
#include "voxsel/kernels.hpp"

namespace voxsel::stage1 {

std::vector<double> voxel_feature(const FeatureMatrix& features, const Voxel& voxel) {
  std::vector<double> acc(features.cols(), 0.0);
  const auto& k = kernels::active();
  for (PointIndex i : voxel.point_indices) {
    k.accumulate_row(acc.data(), features.row(i).data(), features.cols());
  }
  if (!voxel.point_indices.empty()) {
    const double inv = 1.0 / static_cast<double>(voxel.point_indices.size());
    for (auto& a : acc) a *= inv;
  }
  return acc;
}

double variance_score(std::span<const double> mean_feature) {
  return kernels::population_variance(mean_feature);
}

double across_points_variance(const FeatureMatrix& features, const Voxel& voxel) {
  const std::size_t dim = features.cols();
  if (dim == 0 || voxel.point_indices.empty()) return 0.0;
  const auto mean = voxel_feature(features, voxel);
  double ss = 0.0;
  for (PointIndex i : voxel.point_indices) {
    const auto row = features.row(i);
    for (std::size_t d = 0; d < dim; ++d) {
      const double t = row[d] - mean[d];
      ss += t * t;
    }
  }
  return ss / static_cast<double>(dim * voxel.point_indices.size());
}

double gain(double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("gain is defined for sigma >= 0");
  return std::log1p(sigma);
}

VoxelFeature score_voxel(const FeatureMatrix& features, const Voxel& voxel,
                         VarianceMode mode) {
  VoxelFeature vf;
  vf.coord = voxel.coord;
  vf.mean_feature = voxel_feature(features, voxel);
  vf.sigma = mode == VarianceMode::kAcrossDimensions ? variance_score(vf.mean_feature)
                                                     : across_points_variance(features, voxel);
  // Rounding can push a zero variance a hair below zero.
  vf.sigma = std::max(vf.sigma, 0.0);
  vf.gain = gain(vf.sigma);
  return vf;
}

double objective(std::span<const VoxelFeature> chosen) {
  double total = 0.0;
  for (const auto& v : chosen) total += v.gain;
  return total;
}

std::vector<VoxelCoord> select_stage1(std::span<const VoxelFeature> pool, std::size_t k) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take = std::min(k, pool.size());
  auto better = [&](std::size_t a, std::size_t b) {
    if (pool[a].gain != pool[b].gain) return pool[a].gain > pool[b].gain;
    return pool[a].coord < pool[b].coord;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), better);
  std::vector<VoxelCoord> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(pool[order[i]].coord);
  return out;
}

void write_scores(std::ostream& os, std::span<const VoxelFeature> scores) {
  for (const auto& s : scores) {
    nlohmann::json rec;
    rec["coord"] = {s.coord.x, s.coord.y, s.coord.z};
    rec["sigma"] = s.sigma;
    rec["gain"] = s.gain;
    os << rec.dump() << '\n';
  }
}

}  // namespace voxsel::stage1
