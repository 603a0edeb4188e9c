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

#include "voxsel/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <unordered_set>

#include "json.hpp"

#include "voxsel/error.hpp"
#include "voxsel/kernels.hpp"

namespace voxsel {
namespace {

std::vector<std::int32_t> cell_coords(const PointCloud& cloud, double lambda) {
  std::vector<std::int32_t> cells(cloud.size() * 3);
  std::size_t bad = 0;
  if (!kernels::floor_div_coords(cloud.points, lambda, cells, &bad)) {
    throw DataError("cloud '" + cloud.cloud_id + "': point " + std::to_string(bad) +
                    " has a non-finite or out-of-range cell coordinate");
  }
  return cells;
}

VoxelCoord cell_at(const std::vector<std::int32_t>& cells, std::size_t k) {
  return {cells[3 * k], cells[3 * k + 1], cells[3 * k + 2]};
}

void require_positive(double lambda, const char* name) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError(std::string(name) + " must be positive, got " +
                      std::to_string(lambda));
  }
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const VoxelCoord& c) {
  return os << '(' << c.x << ", " << c.y << ", " << c.z << ')';
}

void VoxelGridConfig::validate() const {
  require_positive(lambda_select, "lambda_select");
  require_positive(lambda_train, "lambda_train");
  require_positive(effective_dedup(), "dedup_lambda");
  if (effective_dedup() > lambda_select) {
    throw DomainError("dedup_lambda must not exceed lambda_select");
  }
}

std::optional<std::size_t> VoxelGrid::index_of(const VoxelCoord& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Voxel* VoxelGrid::find(const VoxelCoord& c) const {
  auto i = index_of(c);
  return i ? &voxels_[*i] : nullptr;
}

const Voxel& VoxelGrid::at(const VoxelCoord& c) const {
  if (const Voxel* v = find(c)) return *v;
  std::ostringstream msg;
  msg << "voxel " << c << " is not in grid '" << cloud_id_ << "'";
  throw ConsistencyError(msg.str());
}

std::size_t VoxelGrid::surviving_points() const {
  std::size_t n = 0;
  for (const auto& v : voxels_) n += v.point_indices.size();
  return n;
}

VoxelCoord voxel_coord(const Point& p, double lambda) {
  require_positive(lambda, "lambda");
  if (!p.finite()) throw DataError("non-finite point coordinate");
  std::int32_t cell[3];
  std::size_t bad = 0;
  if (!kernels::scalar_table().floor_div_coords(&p, 1, lambda, cell, &bad)) {
    throw DataError("cell coordinate out of range");
  }
  return {cell[0], cell[1], cell[2]};
}

VoxelGrid build_grid(const PointCloud& cloud, double lambda, double dedup_lambda) {
  require_positive(lambda, "lambda");
  require_positive(dedup_lambda, "dedup_lambda");

  VoxelGrid grid;
  grid.lambda_ = lambda;
  grid.cloud_id_ = cloud.cloud_id;
  if (cloud.points.empty()) return grid;

  const auto dedup_cells = cell_coords(cloud, dedup_lambda);
  const auto cells = cell_coords(cloud, lambda);
  const std::size_t n = cloud.size();

  std::unordered_set<VoxelCoord, VoxelCoordHash> occupied;
  occupied.reserve(n);
  std::vector<bool> survives(n);
  for (std::size_t k = 0; k < n; ++k) {
    survives[k] = occupied.insert(cell_at(dedup_cells, k)).second;
  }

  grid.index_.reserve(n / 4 + 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (!survives[k]) continue;
    const VoxelCoord c = cell_at(cells, k);
    auto [it, inserted] = grid.index_.try_emplace(c, grid.voxels_.size());
    if (inserted) grid.voxels_.push_back(Voxel{c, {}, {}});
    grid.voxels_[it->second].point_indices.push_back(static_cast<PointIndex>(k));
  }
  // A filtered point is annotatable only if its own cell holds a survivor.
  for (std::size_t k = 0; k < n; ++k) {
    auto it = grid.index_.find(cell_at(cells, k));
    if (it != grid.index_.end()) {
      grid.voxels_[it->second].cell_indices.push_back(static_cast<PointIndex>(k));
    }
  }
  return grid;
}

VoxelGrid build_grid(const PointCloud& cloud, const VoxelGridConfig& config) {
  config.validate();
  return build_grid(cloud, config.lambda_select, config.effective_dedup());
}

std::size_t distinct_labels(const Voxel& voxel, std::span<const ClassId> labels) {
  std::vector<ClassId> seen;
  for (PointIndex k : voxel.point_indices) {
    if (k >= labels.size()) {
      throw ConsistencyError("label sequence does not cover point " + std::to_string(k));
    }
    if (std::find(seen.begin(), seen.end(), labels[k]) == seen.end()) {
      seen.push_back(labels[k]);
    }
  }
  return seen.size();
}

double multi_class_fraction(const VoxelGrid& grid, std::span<const ClassId> labels) {
  if (grid.empty()) throw DomainError("multi-class fraction of an empty grid is undefined");
  std::size_t multi = 0;
  for (const auto& v : grid.voxels()) {
    if (distinct_labels(v, labels) >= 2) ++multi;
  }
  return static_cast<double>(multi) / static_cast<double>(grid.size());
}

void write_grid_summary(std::ostream& os, const VoxelGrid& grid,
                        std::optional<std::span<const ClassId>> labels) {
  for (const auto& v : grid.voxels()) {
    nlohmann::json rec;
    rec["coord"] = {v.coord.x, v.coord.y, v.coord.z};
    rec["points"] = v.point_indices.size();
    if (labels) rec["distinct_labels"] = distinct_labels(v, *labels);
    os << rec.dump() << '\n';
  }
}

}  // namespace voxsel
