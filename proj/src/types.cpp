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

#include "voxsel/types.hpp"

#include <string>
#include <utility>

#include "voxsel/error.hpp"

namespace voxsel {

void PointCloud::validate(std::size_t num_classes) const {
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!points[k].finite()) {
      throw DataError("cloud '" + cloud_id + "': non-finite point at index " +
                      std::to_string(k));
    }
  }
  if (!labels) return;
  if (labels->size() != points.size()) {
    throw ConsistencyError("cloud '" + cloud_id + "': " +
                           std::to_string(labels->size()) + " labels for " +
                           std::to_string(points.size()) + " points");
  }
  for (std::size_t k = 0; k < labels->size(); ++k) {
    if ((*labels)[k] >= num_classes) {
      throw DataError("cloud '" + cloud_id + "': label " +
                      std::to_string((*labels)[k]) + " at index " +
                      std::to_string(k) + " is not below class count " +
                      std::to_string(num_classes));
    }
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ConsistencyError("matrix payload has " + std::to_string(data_.size()) +
                           " values, expected " + std::to_string(rows_ * cols_));
  }
}

void Matrix::require_finite(const char* what) const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw DataError(std::string(what) + ": non-finite value at row " +
                      std::to_string(i / cols_) + ", col " +
                      std::to_string(i % cols_));
    }
  }
}

std::size_t argmax_first(std::span<const float> row) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < row.size(); ++c) {
    if (row[c] > row[best]) best = c;
  }
  return best;
}

LogitEnsemble make_ensemble(std::vector<Matrix> passes) {
  if (passes.empty()) {
    throw ConsistencyError("logit ensemble needs at least one pass");
  }
  const std::size_t n = passes.front().rows();
  const std::size_t c = passes.front().cols();
  for (std::size_t t = 1; t < passes.size(); ++t) {
    if (passes[t].rows() != n || passes[t].cols() != c) {
      throw ConsistencyError("logit pass " + std::to_string(t) + " is " +
                             std::to_string(passes[t].rows()) + "x" +
                             std::to_string(passes[t].cols()) + ", expected " +
                             std::to_string(n) + "x" + std::to_string(c));
    }
  }
  LogitEnsemble out;
  out.mean_logits = Matrix(n, c);
  const double inv_t = 1.0 / static_cast<double>(passes.size());
  auto mean = out.mean_logits.values();
  for (std::size_t i = 0; i < n * c; ++i) {
    double acc = 0.0;
    for (const auto& p : passes) acc += p.values()[i];
    mean[i] = static_cast<float>(acc * inv_t);
  }
  out.hypothetical_labels.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.hypothetical_labels[k] =
        static_cast<ClassId>(c == 0 ? 0 : argmax_first(out.mean_logits.row(k)));
  }
  out.passes = std::move(passes);
  return out;
}

}  // namespace voxsel
