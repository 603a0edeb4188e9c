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

// Synthetic labeled scenes: flat class-labeled patches laid out on a grid
// of slots, a few of them placed flush against a patch of another class so
// that their shared edge produces voxels spanning two classes. Point-level
// class frequencies follow the configured profile up to rounding.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "voxsel/types.hpp"

namespace voxsel {

struct SceneGenConfig {
  std::size_t num_clouds = 10;
  std::size_t clusters_per_cloud = 12;
  std::size_t points_per_cluster = 150;  // mean
  std::size_t num_classes = 3;
  // Explicit point-level class frequencies. When empty a power law
  // f_c ~ (c + 1)^-exponent over num_classes is used.
  std::vector<double> class_frequencies;
  double power_law_exponent = 1.5;
  // Fraction of clusters that sit flush against a cluster of another class.
  double boundary_overlap = 0.15;
  double extent = 40.0;          // side of the square scene, meters
  double point_density = 128.0;  // points per square meter of patch
  double patch_thickness = 0.15;
  double slot_gap = 1.0;         // free space between neighbouring slots
  double reflectance_noise = 0.05;
  std::uint64_t seed = 0;

  // Throws DomainError for an invalid profile or geometry.
  void validate() const;
  std::vector<double> frequencies() const;
};

// Mean reflectance of each class: levels (c + 0.5) / C under a seeded
// permutation shared by every cloud generated from the same seed.
std::vector<double> class_reflectance_levels(const SceneGenConfig& config);

// Clouds first_index .. first_index + count - 1 of the scene stream.
std::vector<PointCloud> generate_scenes(const SceneGenConfig& config, std::size_t first_index,
                                        std::size_t count);
inline std::vector<PointCloud> generate_scenes(const SceneGenConfig& config) {
  return generate_scenes(config, 0, config.num_clouds);
}

}  // namespace voxsel
