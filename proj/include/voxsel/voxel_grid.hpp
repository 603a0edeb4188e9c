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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "voxsel/types.hpp"

namespace voxsel {

// Integer cell index floor((x, y, z) / lambda). Ordered lexicographically
// (x, then y, then z); that order breaks every score tie in the library.
struct VoxelCoord {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  friend auto operator<=>(const VoxelCoord&, const VoxelCoord&) = default;
  friend bool operator==(const VoxelCoord&, const VoxelCoord&) = default;
};

std::ostream& operator<<(std::ostream& os, const VoxelCoord& c);

struct VoxelCoordHash {
  std::size_t operator()(const VoxelCoord& c) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(c.x);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(c.y);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(c.z);
    h ^= h >> 29;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ull);
  }
};

struct VoxelGridConfig {
  double lambda_select = 0.25;
  double lambda_train = 0.05;
  // Resolution of near-duplicate removal. Defaults to lambda_train.
  std::optional<double> dedup_lambda;

  double effective_dedup() const { return dedup_lambda.value_or(lambda_train); }
  // Throws DomainError unless all sizes are positive and dedup <= select.
  void validate() const;
};

struct Voxel {
  VoxelCoord coord;
  // Points that survived deduplication, in scan order. Never empty.
  std::vector<PointIndex> point_indices;
  // Every original point of the cloud falling inside this cell, including
  // dedup-filtered ones, in scan order. This is what annotating the voxel
  // labels.
  std::vector<PointIndex> cell_indices;
};

class VoxelGrid {
 public:
  VoxelGrid() = default;

  double lambda() const { return lambda_; }
  const std::string& cloud_id() const { return cloud_id_; }
  std::size_t size() const { return voxels_.size(); }
  bool empty() const { return voxels_.empty(); }

  // Voxels in order of first appearance in the scan.
  std::span<const Voxel> voxels() const { return voxels_; }
  const Voxel& voxel(std::size_t i) const { return voxels_[i]; }

  std::optional<std::size_t> index_of(const VoxelCoord& c) const;
  const Voxel* find(const VoxelCoord& c) const;
  // Throws ConsistencyError when `c` is not a voxel of this grid.
  const Voxel& at(const VoxelCoord& c) const;

  std::size_t surviving_points() const;

 private:
  friend VoxelGrid build_grid(const PointCloud&, double, double);

  double lambda_ = 0.0;
  std::string cloud_id_;
  std::vector<Voxel> voxels_;
  std::unordered_map<VoxelCoord, std::size_t, VoxelCoordHash> index_;
};

// floor toward -infinity per axis. Throws DataError for non-finite input
// and DomainError unless lambda > 0.
VoxelCoord voxel_coord(const Point& p, double lambda);

// Deduplicates at dedup_lambda (first point in scan order wins a cell), then
// groups the survivors into lambda-sized voxels.
VoxelGrid build_grid(const PointCloud& cloud, double lambda, double dedup_lambda);
VoxelGrid build_grid(const PointCloud& cloud, const VoxelGridConfig& config);

// Number of distinct labels among a voxel's surviving points.
std::size_t distinct_labels(const Voxel& voxel, std::span<const ClassId> labels);

// Fraction of voxels whose surviving points carry two or more labels.
// Throws DomainError on an empty grid.
double multi_class_fraction(const VoxelGrid& grid, std::span<const ClassId> labels);

// One JSON object per line: {"coord":[x,y,z],"points":n[,"distinct_labels":k]}
void write_grid_summary(std::ostream& os, const VoxelGrid& grid,
                        std::optional<std::span<const ClassId>> labels);

}  // namespace voxsel
