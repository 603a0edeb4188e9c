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

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "voxsel/types.hpp"

namespace testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("voxsel_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<voxsel::Point> random_points(std::size_t n, double half_extent,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> pos(static_cast<float>(-half_extent),
                                            static_cast<float>(half_extent));
  std::uniform_real_distribution<float> refl(0.0f, 1.0f);
  std::vector<voxsel::Point> out(n);
  for (auto& p : out) p = {pos(rng), pos(rng), pos(rng), refl(rng)};
  return out;
}

inline voxsel::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                    float lo = -1.0f, float hi = 1.0f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(lo, hi);
  voxsel::Matrix m(rows, cols);
  for (auto& v : m.values()) v = u(rng);
  return m;
}

// Cloud whose j-th voxel at lambda = 1 holds sizes[j] points; voxels are laid
// out along a serpentine in x and y so their coords are distinct and not in
// scan order lexicographically. Dedup at 0.01 keeps every point.
inline voxsel::PointCloud strip_cloud(const std::vector<std::size_t>& sizes) {
  voxsel::PointCloud c;
  c.cloud_id = "strip";
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    const float x = static_cast<float>((j * 7) % 11);
    const float y = static_cast<float>(j / 11);
    for (std::size_t i = 0; i < sizes[j]; ++i) {
      c.points.push_back({x + 0.05f + 0.03f * static_cast<float>(i % 30),
                          y + 0.05f + 0.03f * static_cast<float>(i / 30), 0.5f, 0.5f});
    }
  }
  return c;
}

}  // namespace testing
