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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voxsel {

using ClassId = std::uint32_t;
using PointIndex = std::uint32_t;

// A single LiDAR return. Coordinates in meters, reflectance in [0, 1].
struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float r = 0.0f;

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
           std::isfinite(r);
  }
  friend bool operator==(const Point&, const Point&) = default;
};

struct PointCloud {
  std::string cloud_id;
  std::vector<Point> points;
  // Ground-truth class per point, when known.
  std::optional<std::vector<ClassId>> labels;

  std::size_t size() const { return points.size(); }
  bool labeled() const { return labels.has_value(); }

  // Throws DataError / ConsistencyError when the invariants do not hold.
  void validate(std::size_t num_classes) const;
};

// Dense row-major float matrix. Used for per-point features and for each
// stochastic logit pass.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  std::span<const float> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<float> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  float operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  float& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const float> values() const { return data_; }
  std::span<float> values() { return data_; }

  // Throws DataError naming the first non-finite entry.
  void require_finite(const char* what) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

using FeatureMatrix = Matrix;

// T stochastic logit passes over the same N points, their element-wise
// mean and the argmax label of each mean row.
struct LogitEnsemble {
  std::vector<Matrix> passes;
  Matrix mean_logits;
  std::vector<ClassId> hypothetical_labels;

  std::size_t num_points() const { return mean_logits.rows(); }
  std::size_t num_classes() const { return mean_logits.cols(); }
};

// Builds the ensemble from raw passes: mean and hypothetical labels are
// derived here. Throws ConsistencyError on shape mismatch or when passes is
// empty.
LogitEnsemble make_ensemble(std::vector<Matrix> passes);

// Index of the largest entry, smallest index on ties.
std::size_t argmax_first(std::span<const float> row);

}  // namespace voxsel
