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

// Stage 3: class balancing. For a candidate voxel j the proportions
//   L[c] = (ledger[c] + voxel[c]) / (ledger_total + voxel_total)
// are softmax-normalized to A and scored by the entropy H = -sum A ln A.
// Voxels are picked greedily, each pick folded into a working ledger before
// the next step.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "voxsel/types.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel {

// Per-class point counts of the labeled set plus remaining budget.
class LabelLedger {
 public:
  LabelLedger() = default;
  LabelLedger(std::size_t num_classes, std::uint64_t budget)
      : per_class_(num_classes, 0), budget_remaining_(budget) {}

  std::size_t num_classes() const { return per_class_.size(); }
  std::uint64_t total() const { return total_; }
  std::uint64_t count(std::size_t c) const { return per_class_[c]; }
  std::span<const std::uint64_t> per_class() const { return per_class_; }
  std::uint64_t budget_remaining() const { return budget_remaining_; }

  void add(ClassId c, std::uint64_t n = 1);
  void add_counts(std::span<const std::uint64_t> counts);
  // Debits the budget. Throws BudgetExhausted when `points` exceeds it.
  void spend(std::uint64_t points);

  friend bool operator==(const LabelLedger&, const LabelLedger&) = default;

 private:
  std::vector<std::uint64_t> per_class_;
  std::uint64_t total_ = 0;
  std::uint64_t budget_remaining_ = 0;
};

namespace stage3 {

enum class EntropyMode {
  kSoftmax,         // entropy of softmax(L)
  kRawProportions,  // entropy of L itself (ablation)
};

struct BalanceCandidate {
  VoxelCoord coord;
  std::vector<std::uint64_t> class_counts;  // hypothetical labels
};

struct BalanceScore {
  VoxelCoord coord;
  std::vector<double> proportions;
  std::vector<double> softmaxed;
  double entropy = 0.0;
};

// Throws DomainError when ledger and voxel are both empty.
std::vector<double> balance_proportions(const LabelLedger& ledger,
                                        std::span<const std::uint64_t> voxel_counts);
std::vector<double> softmax(std::span<const double> values);
double balance_entropy(std::span<const double> proportions,
                       EntropyMode mode = EntropyMode::kSoftmax);

BalanceScore score_balance(const LabelLedger& ledger, const BalanceCandidate& candidate);

// Hypothetical per-class counts over a voxel's surviving points.
BalanceCandidate make_candidate(const LogitEnsemble& ensemble, const Voxel& voxel);

struct GreedyStep {
  VoxelCoord coord;
  double entropy = 0.0;
};

std::vector<GreedyStep> greedy_balance(const LabelLedger& ledger,
                                       std::span<const BalanceCandidate> candidates,
                                       std::size_t k,
                                       EntropyMode mode = EntropyMode::kSoftmax);

std::vector<VoxelCoord> select_stage3(const LabelLedger& ledger,
                                      std::span<const BalanceCandidate> candidates,
                                      std::size_t k,
                                      EntropyMode mode = EntropyMode::kSoftmax);

void write_steps(std::ostream& os, std::span<const GreedyStep> steps,
                 std::span<const BalanceCandidate> candidates);

}  // namespace stage3
}  // namespace voxsel
