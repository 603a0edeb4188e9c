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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "voxsel/types.hpp"

namespace voxsel {

struct ModelConfig {
  std::size_t passes = 5;      // T
  double dropout = 0.1;        // p
  std::size_t feature_dim = 16;  // D
  std::uint64_t seed = 0;

  // Throws DomainError unless T >= 1, 0 <= p < 1 and D >= 1.
  void validate() const;
};

inline constexpr float kUndefinedClassLogit = -1e9f;

// Nearest-prototype classifier standing in for a segmentation network.
struct PrototypeModel {
  Matrix prototypes;  // C x D
  std::vector<std::uint64_t> counts;

  std::size_t num_classes() const { return counts.size(); }
  std::size_t feature_dim() const { return prototypes.cols(); }
  bool defined(std::size_t c) const { return counts[c] > 0; }
  std::size_t defined_count() const;
};

// Per-class mean of the labeled feature rows. labels is indexed by point.
PrototypeModel fit_prototypes(const FeatureMatrix& features,
                              std::span<const PointIndex> labeled_indices,
                              std::span<const ClassId> labels, std::size_t num_classes);

// Inverted-dropout scale for pass `pass`: each of `dim` entries is 1/(1-p)
// with probability 1-p and 0 otherwise, drawn from
// mt19937_64(mix_seed(seed, pass)) with std::bernoulli_distribution.
std::vector<double> dropout_scale(std::uint64_t seed, std::size_t pass, std::size_t dim,
                                  double dropout);

// T passes of logit[k][c] = -|mask*(f_k - prototype_c)|^2 with a mask
// shared by all points of a pass.
LogitEnsemble mc_forward(const PrototypeModel& model, const FeatureMatrix& features,
                         const ModelConfig& config);

// Deterministic prediction (no dropout): argmax of the logits.
std::vector<ClassId> predict(const PrototypeModel& model, const FeatureMatrix& features);

class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual FeatureMatrix features(const PointCloud& cloud) const = 0;
};

// Geometric features: (x/s, y/s, z/s, r) followed by dim-4 entries of a
// seeded Gaussian projection of the normalized position.
class MockFeatureProvider final : public FeatureProvider {
 public:
  static constexpr double kDefaultCoordScale = 1000.0;

  MockFeatureProvider(std::size_t dim, std::uint64_t seed,
                      double coord_scale = kDefaultCoordScale);
  FeatureMatrix features(const PointCloud& cloud) const override;

  std::size_t dim() const { return dim_; }
  const std::vector<double>& projection() const { return projection_; }

 private:
  std::size_t dim_;
  double coord_scale_;
  std::vector<double> projection_;  // (dim-4) x 3, row-major
};

class FileFeatureProvider final : public FeatureProvider {
 public:
  explicit FileFeatureProvider(std::filesystem::path path) : path_(std::move(path)) {}
  FeatureMatrix features(const PointCloud& cloud) const override;

 private:
  std::filesystem::path path_;
};

// Loads one SELMATv1 matrix per dropout pass, in the given order.
LogitEnsemble load_logit_passes(std::span<const std::filesystem::path> paths,
                                std::size_t expected_rows, std::size_t num_classes);

}  // namespace voxsel
