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

#include "voxsel/scene_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "voxsel/error.hpp"
#include "voxsel/random.hpp"

namespace voxsel {
namespace {

// Rounds shares * total to integers summing to total, each at least
// `floor_each`.
std::vector<std::size_t> apportion(const std::vector<double>& shares, std::size_t total,
                                   std::size_t floor_each) {
  std::vector<std::size_t> out(shares.size(), floor_each);
  std::size_t assigned = floor_each * shares.size();
  std::vector<double> want(shares.size());
  for (std::size_t c = 0; c < shares.size(); ++c) want[c] = shares[c] * static_cast<double>(total);
  for (std::size_t c = 0; c < shares.size(); ++c) {
    const auto base = static_cast<std::size_t>(std::floor(want[c]));
    if (base > out[c]) {
      assigned += base - out[c];
      out[c] = base;
    }
  }
  while (assigned < total) {
    std::size_t best = 0;
    double best_gap = -1e300;
    for (std::size_t c = 0; c < shares.size(); ++c) {
      const double gap = want[c] - static_cast<double>(out[c]);
      if (gap > best_gap) {
        best_gap = gap;
        best = c;
      }
    }
    ++out[best];
    ++assigned;
  }
  while (assigned > total) {
    std::size_t best = shares.size();
    double best_gap = 1e300;
    for (std::size_t c = 0; c < shares.size(); ++c) {
      if (out[c] <= floor_each) continue;
      const double gap = want[c] - static_cast<double>(out[c]);
      if (gap < best_gap) {
        best_gap = gap;
        best = c;
      }
    }
    --out[best];
    --assigned;
  }
  return out;
}

struct Patch {
  ClassId label;
  std::size_t points;
  double sx, sy;
  double x0 = 0.0, y0 = 0.0, z0 = 0.0;
};

// A slot holds one patch or a flush pair (second patch starts where the
// first ends along x).
struct Unit {
  std::size_t first;
  std::optional<std::size_t> second;
};

}  // namespace

std::vector<double> SceneGenConfig::frequencies() const {
  if (!class_frequencies.empty()) return class_frequencies;
  std::vector<double> f(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    f[c] = std::pow(static_cast<double>(c + 1), -power_law_exponent);
  }
  const double z = std::accumulate(f.begin(), f.end(), 0.0);
  for (auto& v : f) v /= z;
  return f;
}

void SceneGenConfig::validate() const {
  const auto f = frequencies();
  if (f.size() < 2) throw DomainError("scenes need at least two classes");
  if (!class_frequencies.empty() && class_frequencies.size() != num_classes) {
    throw DomainError("class frequency profile has " + std::to_string(class_frequencies.size()) +
                      " entries for " + std::to_string(num_classes) + " classes");
  }
  double sum = 0.0;
  for (double v : f) {
    if (!(v > 0.0)) throw DomainError("class frequencies must be positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw DomainError("class frequencies must sum to 1");
  if (clusters_per_cloud < f.size()) {
    throw DomainError("need at least one cluster per class");
  }
  if (points_per_cluster == 0) throw DomainError("clusters need points");
  if (!(boundary_overlap >= 0.0 && boundary_overlap <= 1.0)) {
    throw DomainError("boundary overlap must be a fraction");
  }
  if (!(extent > 0.0 && point_density > 0.0 && patch_thickness > 0.0 && slot_gap >= 0.0 &&
        reflectance_noise >= 0.0)) {
    throw DomainError("scene geometry parameters must be positive");
  }
}

std::vector<double> class_reflectance_levels(const SceneGenConfig& config) {
  const std::size_t classes = config.frequencies().size();
  std::vector<std::size_t> perm(classes);
  std::iota(perm.begin(), perm.end(), 0);
  auto rng = make_rng(config.seed, 0xC1A55);
  for (std::size_t i = classes; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  std::vector<double> levels(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    levels[c] = (static_cast<double>(perm[c]) + 0.5) / static_cast<double>(classes);
  }
  return levels;
}

std::vector<PointCloud> generate_scenes(const SceneGenConfig& config, std::size_t first_index,
                                        std::size_t count) {
  config.validate();
  const auto freq = config.frequencies();
  const std::size_t classes = freq.size();
  const std::size_t clusters = config.clusters_per_cloud;
  const auto levels = class_reflectance_levels(config);

  const auto point_quota = apportion(freq, clusters * config.points_per_cluster, 1);
  const auto cluster_quota = apportion(freq, clusters, 1);

  std::vector<PointCloud> clouds;
  clouds.reserve(count);
  for (std::size_t ci = first_index; ci < first_index + count; ++ci) {
    auto rng = make_rng(config.seed, 0x5CE0000 + ci);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Patch> patches;
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t j = 0; j < cluster_quota[c]; ++j) {
        std::size_t pts = point_quota[c] / cluster_quota[c] + (j < point_quota[c] % cluster_quota[c]);
        pts = std::max<std::size_t>(pts, 1);
        const double area = static_cast<double>(pts) / config.point_density;
        const double aspect = 0.5 + 1.5 * unit(rng);
        const double sx = std::sqrt(area * aspect);
        patches.push_back({static_cast<ClassId>(c), pts, sx, area / sx});
      }
    }
    std::vector<std::size_t> order(patches.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    // Pair up patches of different classes for the flush boundaries.
    const auto pairs = static_cast<std::size_t>(
        std::llround(config.boundary_overlap * static_cast<double>(clusters) / 2.0));
    std::vector<Unit> units;
    std::vector<bool> used(patches.size(), false);
    std::size_t made = 0;
    for (std::size_t a = 0; a < order.size() && made < pairs; ++a) {
      if (used[order[a]]) continue;
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        if (used[order[b]] || patches[order[b]].label == patches[order[a]].label) continue;
        used[order[a]] = used[order[b]] = true;
        units.push_back({order[a], order[b]});
        ++made;
        break;
      }
    }
    for (std::size_t i : order) {
      if (!used[i]) units.push_back({i, std::nullopt});
    }

    double pitch = 0.0;
    for (const auto& u : units) {
      double w = patches[u.first].sx;
      double h = patches[u.first].sy;
      if (u.second) {
        w += patches[*u.second].sx;
        h = std::max(h, patches[*u.second].sy);
      }
      pitch = std::max({pitch, w, h});
    }
    pitch += config.slot_gap;
    const auto per_side = static_cast<std::size_t>(std::floor(config.extent / pitch));
    if (per_side * per_side < units.size()) {
      throw DomainError("scene extent " + std::to_string(config.extent) + " m cannot hold " +
                        std::to_string(units.size()) + " clusters");
    }
    std::vector<std::size_t> slots(per_side * per_side);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);

    const double origin = -config.extent / 2.0;
    for (std::size_t u = 0; u < units.size(); ++u) {
      const double sx0 = origin + static_cast<double>(slots[u] % per_side) * pitch;
      const double sy0 = origin + static_cast<double>(slots[u] / per_side) * pitch;
      Patch& first = patches[units[u].first];
      double width = first.sx;
      double height = first.sy;
      if (units[u].second) {
        width += patches[*units[u].second].sx;
        height = std::max(height, patches[*units[u].second].sy);
      }
      const double free_x = pitch - config.slot_gap - width;
      const double free_y = pitch - config.slot_gap - height;
      first.x0 = sx0 + config.slot_gap / 2 + free_x * unit(rng);
      first.y0 = sy0 + config.slot_gap / 2 + free_y * unit(rng);
      first.z0 = 2.0 * unit(rng);
      if (units[u].second) {
        Patch& second = patches[*units[u].second];
        second.x0 = first.x0 + first.sx;
        second.y0 = first.y0;
        second.z0 = first.z0;
      }
    }

    PointCloud cloud;
    cloud.cloud_id = "scene_" + std::to_string(ci);
    std::vector<ClassId> labels;
    std::normal_distribution<double> noise(0.0, config.reflectance_noise);
    for (const auto& p : patches) {
      for (std::size_t k = 0; k < p.points; ++k) {
        const double r = std::clamp(levels[p.label] + noise(rng), 0.0, 1.0);
        cloud.points.push_back({static_cast<float>(p.x0 + p.sx * unit(rng)),
                                static_cast<float>(p.y0 + p.sy * unit(rng)),
                                static_cast<float>(p.z0 + config.patch_thickness * unit(rng)),
                                static_cast<float>(r)});
        labels.push_back(p.label);
      }
    }
    cloud.labels = std::move(labels);
    clouds.push_back(std::move(cloud));
  }
  return clouds;
}

}  // namespace voxsel
