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

#include "voxsel/metrics.hpp"

#include <cmath>
#include <string>

#include "voxsel/error.hpp"

namespace voxsel::metrics {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (auto v : counts_) n += v;
  return n;
}

void ConfusionMatrix::add(ClassId truth, ClassId predicted, std::uint64_t n) {
  if (truth >= classes_ || predicted >= classes_) {
    throw DataError("class pair (" + std::to_string(truth) + ", " +
                    std::to_string(predicted) + ") outside a " + std::to_string(classes_) +
                    "-class confusion matrix");
  }
  counts_[truth * classes_ + predicted] += n;
}

void ConfusionMatrix::add_all(std::span<const ClassId> truth,
                              std::span<const ClassId> predicted) {
  if (truth.size() != predicted.size()) {
    throw ConsistencyError("ground truth and predictions differ in length");
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= classes_ || predicted[i] >= classes_) {
      throw DataError("class pair (" + std::to_string(truth[i]) + ", " +
                      std::to_string(predicted[i]) + ") at point " + std::to_string(i) +
                      " outside a " + std::to_string(classes_) + "-class confusion matrix");
    }
  }
  for (std::size_t i = 0; i < truth.size(); ++i) ++counts_[truth[i] * classes_ + predicted[i]];
}

std::uint64_t ConfusionMatrix::false_positives(std::size_t c) const {
  std::uint64_t n = 0;
  for (std::size_t t = 0; t < classes_; ++t) {
    if (t != c) n += (*this)(t, c);
  }
  return n;
}

std::uint64_t ConfusionMatrix::false_negatives(std::size_t c) const {
  std::uint64_t n = 0;
  for (std::size_t p = 0; p < classes_; ++p) {
    if (p != c) n += (*this)(c, p);
  }
  return n;
}

std::uint64_t ConfusionMatrix::support(std::size_t c) const {
  return true_positives(c) + false_negatives(c);
}

std::vector<std::optional<double>> iou_per_class(const ConfusionMatrix& cm) {
  std::vector<std::optional<double>> out(cm.num_classes());
  for (std::size_t c = 0; c < cm.num_classes(); ++c) {
    const auto tp = cm.true_positives(c);
    const auto denom = tp + cm.false_positives(c) + cm.false_negatives(c);
    if (denom > 0) out[c] = static_cast<double>(tp) / static_cast<double>(denom);
  }
  return out;
}

std::optional<double> mean_of_present(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::vector<std::optional<double>> accuracy_per_class(const ConfusionMatrix& cm) {
  std::vector<std::optional<double>> out(cm.num_classes());
  for (std::size_t c = 0; c < cm.num_classes(); ++c) {
    const auto s = cm.support(c);
    if (s > 0) out[c] = static_cast<double>(cm.true_positives(c)) / static_cast<double>(s);
  }
  return out;
}

double distribution_entropy(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw DomainError("entropy of an empty distribution");
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace voxsel::metrics
