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
#include <optional>
#include <span>
#include <vector>

#include "voxsel/types.hpp"

namespace voxsel::metrics {

// Rows are ground truth, columns are predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes)
      : classes_(num_classes), counts_(num_classes * num_classes, 0) {}

  std::size_t num_classes() const { return classes_; }
  std::uint64_t operator()(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * classes_ + predicted];
  }
  std::uint64_t total() const;

  void add(ClassId truth, ClassId predicted, std::uint64_t n = 1);
  // Throws ConsistencyError on length mismatch, DataError on a bad class.
  void add_all(std::span<const ClassId> truth, std::span<const ClassId> predicted);

  std::uint64_t true_positives(std::size_t c) const { return (*this)(c, c); }
  std::uint64_t false_positives(std::size_t c) const;
  std::uint64_t false_negatives(std::size_t c) const;
  std::uint64_t support(std::size_t c) const;  // ground-truth count

 private:
  std::size_t classes_;
  std::vector<std::uint64_t> counts_;
};

// TP / (TP + FP + FN); nullopt when the class never occurs nor is predicted.
std::vector<std::optional<double>> iou_per_class(const ConfusionMatrix& cm);
// Mean over defined entries; nullopt if none is defined.
std::optional<double> mean_of_present(std::span<const std::optional<double>> values);
// TP / support; nullopt for classes absent from ground truth.
std::vector<std::optional<double>> accuracy_per_class(const ConfusionMatrix& cm);

// -sum p ln p over classes with nonzero count. Throws DomainError when the
// total is zero.
double distribution_entropy(std::span<const std::uint64_t> counts);

}  // namespace voxsel::metrics
