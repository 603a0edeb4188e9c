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

#include "voxsel/stage_smpcb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"

#include "voxsel/error.hpp"

namespace voxsel {

void LabelLedger::add(ClassId c, std::uint64_t n) {
  if (c >= per_class_.size()) {
    throw DataError("class " + std::to_string(c) + " is outside the ledger");
  }
  per_class_[c] += n;
  total_ += n;
}

void LabelLedger::add_counts(std::span<const std::uint64_t> counts) {
  if (counts.size() != per_class_.size()) {
    throw ConsistencyError("class count vector does not match the ledger");
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    per_class_[c] += counts[c];
    total_ += counts[c];
  }
}

void LabelLedger::spend(std::uint64_t points) {
  if (points > budget_remaining_) {
    throw BudgetExhausted("annotating " + std::to_string(points) +
                          " points exceeds remaining budget " +
                          std::to_string(budget_remaining_));
  }
  budget_remaining_ -= points;
}

namespace stage3 {

std::vector<double> balance_proportions(const LabelLedger& ledger,
                                        std::span<const std::uint64_t> voxel_counts) {
  if (voxel_counts.size() != ledger.num_classes()) {
    throw ConsistencyError("voxel class counts do not match the ledger");
  }
  std::uint64_t voxel_total = 0;
  for (auto n : voxel_counts) voxel_total += n;
  const std::uint64_t denom = ledger.total() + voxel_total;
  if (denom == 0) throw DomainError("class proportions of an empty ledger and voxel");
  std::vector<double> out(voxel_counts.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = static_cast<double>(ledger.count(c) + voxel_counts[c]) /
             static_cast<double>(denom);
  }
  return out;
}

std::vector<double> softmax(std::span<const double> values) {
  std::vector<double> out(values.size());
  if (values.empty()) return out;
  const double top = *std::max_element(values.begin(), values.end());
  double z = 0.0;
  for (std::size_t c = 0; c < values.size(); ++c) {
    out[c] = std::exp(values[c] - top);
    z += out[c];
  }
  for (auto& a : out) a /= z;
  return out;
}

namespace {

double shannon(std::span<const double> p) {
  double h = 0.0;
  for (double a : p) {
    if (a > 0.0) h -= a * std::log(a);
  }
  return h;
}

}  // namespace

double balance_entropy(std::span<const double> proportions, EntropyMode mode) {
  for (double v : proportions) {
    if (!std::isfinite(v)) throw DomainError("non-finite class proportion");
  }
  if (mode == EntropyMode::kRawProportions) return shannon(proportions);
  return shannon(softmax(proportions));
}

BalanceScore score_balance(const LabelLedger& ledger, const BalanceCandidate& candidate) {
  BalanceScore s;
  s.coord = candidate.coord;
  s.proportions = balance_proportions(ledger, candidate.class_counts);
  s.softmaxed = softmax(s.proportions);
  s.entropy = shannon(s.softmaxed);
  return s;
}

BalanceCandidate make_candidate(const LogitEnsemble& ensemble, const Voxel& voxel) {
  BalanceCandidate c{voxel.coord, std::vector<std::uint64_t>(ensemble.num_classes(), 0)};
  for (PointIndex k : voxel.point_indices) ++c.class_counts[ensemble.hypothetical_labels.at(k)];
  return c;
}

std::vector<GreedyStep> greedy_balance(const LabelLedger& ledger,
                                       std::span<const BalanceCandidate> candidates,
                                       std::size_t k, EntropyMode mode) {
  LabelLedger working = ledger;
  std::vector<bool> taken(candidates.size(), false);
  std::vector<GreedyStep> steps;
  const std::size_t rounds = std::min(k, candidates.size());
  for (std::size_t step = 0; step < rounds; ++step) {
    std::size_t best = candidates.size();
    double best_h = 0.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (taken[j]) continue;
      const double h =
          balance_entropy(balance_proportions(working, candidates[j].class_counts), mode);
      if (best == candidates.size() || h > best_h ||
          (h == best_h && candidates[j].coord < candidates[best].coord)) {
        best = j;
        best_h = h;
      }
    }
    taken[best] = true;
    working.add_counts(candidates[best].class_counts);
    steps.push_back({candidates[best].coord, best_h});
  }
  return steps;
}

std::vector<VoxelCoord> select_stage3(const LabelLedger& ledger,
                                      std::span<const BalanceCandidate> candidates,
                                      std::size_t k, EntropyMode mode) {
  std::vector<VoxelCoord> out;
  for (const auto& s : greedy_balance(ledger, candidates, k, mode)) out.push_back(s.coord);
  return out;
}

void write_steps(std::ostream& os, std::span<const GreedyStep> steps,
                 std::span<const BalanceCandidate> candidates) {
  for (const auto& s : steps) {
    nlohmann::json rec;
    rec["coord"] = {s.coord.x, s.coord.y, s.coord.z};
    rec["entropy"] = s.entropy;
    for (const auto& c : candidates) {
      if (c.coord == s.coord) rec["class_counts"] = c.class_counts;
    }
    os << rec.dump() << '\n';
  }
}

}  // namespace stage3
}  // namespace voxsel
