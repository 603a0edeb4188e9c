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

#include "voxsel/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "voxsel/error.hpp"
#include "voxsel/random.hpp"

namespace voxsel::baselines {
namespace {

struct Scored {
  VoxelCoord coord;
  double score;
};

// descending=true keeps the largest scores first.
std::vector<VoxelCoord> take_ranked(std::vector<Scored> scored, std::size_t n,
                                    bool descending) {
  const std::size_t take = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), [descending](const Scored& a, const Scored& b) {
                      if (a.score != b.score) {
                        return descending ? a.score > b.score : a.score < b.score;
                      }
                      return a.coord < b.coord;
                    });
  std::vector<VoxelCoord> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].coord);
  return out;
}

template <typename ScoreFn>
std::vector<Scored> score_pool(const VoxelGrid& grid, std::span<const VoxelCoord> pool,
                               ScoreFn&& fn) {
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  for (const auto& c : pool) scored.push_back({c, fn(grid.at(c))});
  return scored;
}

}  // namespace

double point_entropy(std::span<const float> logits) {
  if (logits.empty()) return 0.0;
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  double weighted = 0.0;
  for (float l : logits) {
    const double s = l - top;
    const double e = std::exp(s);
    z += e;
    weighted += e * s;
  }
  // H = log Z - E[s] with s = l - max.
  return std::max(0.0, std::log(z) - weighted / z);
}

double point_margin(std::span<const float> logits) {
  if (logits.size() < 2) throw DomainError("margin needs at least two classes");
  float first = logits[0] > logits[1] ? logits[0] : logits[1];
  float second = logits[0] > logits[1] ? logits[1] : logits[0];
  for (std::size_t c = 2; c < logits.size(); ++c) {
    if (logits[c] > first) {
      second = first;
      first = logits[c];
    } else if (logits[c] > second) {
      second = logits[c];
    }
  }
  return static_cast<double>(first) - static_cast<double>(second);
}

double label_histogram_entropy(const LogitEnsemble& ensemble, const Voxel& voxel) {
  std::vector<std::size_t> hist(ensemble.num_classes(), 0);
  for (PointIndex k : voxel.point_indices) ++hist[ensemble.hypothetical_labels.at(k)];
  const double n = static_cast<double>(voxel.point_indices.size());
  double h = 0.0;
  for (auto count : hist) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return h;
}

double voxel_entropy_score(const LogitEnsemble& ensemble, const Voxel& voxel,
                           EntropyAggregation aggregation) {
  double acc = 0.0;
  for (PointIndex k : voxel.point_indices) {
    const double h = point_entropy(ensemble.mean_logits.row(k));
    acc = aggregation == EntropyAggregation::kMean ? acc + h : std::max(acc, h);
  }
  if (aggregation == EntropyAggregation::kMean && !voxel.point_indices.empty()) {
    acc /= static_cast<double>(voxel.point_indices.size());
  }
  return acc;
}

double voxel_margin_score(const LogitEnsemble& ensemble, const Voxel& voxel) {
  double best = -std::numeric_limits<double>::infinity();
  for (PointIndex k : voxel.point_indices) {
    best = std::max(best, point_margin(ensemble.mean_logits.row(k)));
  }
  return best;
}

std::vector<VoxelCoord> random_select(std::span<const VoxelCoord> pool, std::size_t n,
                                      std::uint64_t seed) {
  std::vector<VoxelCoord> items(pool.begin(), pool.end());
  const std::size_t take = std::min(n, items.size());
  auto rng = make_rng(seed, 0x52414E44);
  // Partial Fisher-Yates: the first `take` slots are a uniform sample.
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(take);
  return items;
}

std::vector<VoxelCoord> entropy_select(const LogitEnsemble& ensemble, const VoxelGrid& grid,
                                       std::span<const VoxelCoord> pool, std::size_t n,
                                       EntropyAggregation aggregation) {
  return take_ranked(score_pool(grid, pool,
                                [&](const Voxel& v) {
                                  return voxel_entropy_score(ensemble, v, aggregation);
                                }),
                     n, true);
}

std::vector<VoxelCoord> margin_select(const LogitEnsemble& ensemble, const VoxelGrid& grid,
                                      std::span<const VoxelCoord> pool, std::size_t n) {
  if (ensemble.num_classes() < 2) throw DomainError("margin needs at least two classes");
  return take_ranked(
      score_pool(grid, pool, [&](const Voxel& v) { return voxel_margin_score(ensemble, v); }),
      n, false);
}

std::vector<VoxelCoord> vcd_select(const LogitEnsemble& ensemble, const VoxelGrid& grid,
                                   std::span<const VoxelCoord> pool, std::size_t n) {
  return take_ranked(score_pool(grid, pool,
                                [&](const Voxel& v) {
                                  return label_histogram_entropy(ensemble, v);
                                }),
                     n, true);
}

}  // namespace voxsel::baselines
