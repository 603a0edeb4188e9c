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
#include <string>
#include <string_view>
#include <vector>

#include "voxsel/baselines.hpp"
#include "voxsel/stage_smpcb.hpp"
#include "voxsel/stage_vlmue.hpp"
#include "voxsel/stage_vlsss.hpp"
#include "voxsel/types.hpp"
#include "voxsel/voxel_grid.hpp"

namespace voxsel {

enum class MethodKind { kSelect, kRandom, kEntropy, kMargin, kVcd };

struct AcquisitionMethod {
  MethodKind kind = MethodKind::kSelect;
  std::uint64_t seed = 0;  // used by random only
};

std::string_view method_name(MethodKind kind);
// Throws DomainError for an unknown name.
MethodKind parse_method(std::string_view name);

// Which SELECT stages run. A disabled stage passes its input through
// unchanged; with every stage disabled the pool is ordered at random.
struct StageToggles {
  bool representative = true;
  bool uncertainty = true;
  bool balance = true;
};

struct SelectionConfig {
  std::size_t lambda1 = 200;
  std::size_t lambda2 = 5;
  std::size_t lambda3 = 1;
  StageToggles stages;
  stage1::VarianceMode variance = stage1::VarianceMode::kAcrossDimensions;
  stage3::EntropyMode balance_entropy = stage3::EntropyMode::kSoftmax;
  baselines::EntropyAggregation entropy_aggregation = baselines::EntropyAggregation::kMean;

  // Throws DomainError unless lambda1 >= lambda2 >= lambda3 >= 1.
  void validate() const;
};

// Intermediate results of one SELECT run; available for dumps and tests.
struct SelectTrace {
  std::vector<stage1::VoxelFeature> stage1_scores;
  std::vector<VoxelCoord> stage1;
  std::vector<stage2::VoxelUncertainty> stage2_scores;
  std::vector<VoxelCoord> stage2;
  std::vector<stage3::BalanceCandidate> stage3_candidates;
  std::vector<stage3::GreedyStep> stage3;
};

struct AcquisitionInputs {
  const VoxelGrid& grid;
  const FeatureMatrix& features;
  const LogitEnsemble& ensemble;
  const LabelLedger& ledger;
  std::span<const VoxelCoord> pool;
};

// The three-stage pipeline: top lambda1 by representativeness, then the
// lambda2 least confident, then lambda3 picked greedily for class balance.
std::vector<VoxelCoord> select_pipeline(const AcquisitionInputs& in,
                                        const SelectionConfig& config, std::uint64_t seed,
                                        SelectTrace* trace = nullptr);

// Ordered candidates for one cloud. Baselines return the first n of their
// ranking; SELECT returns its pipeline output.
std::vector<VoxelCoord> rank_candidates(const AcquisitionInputs& in,
                                        const AcquisitionMethod& method,
                                        const SelectionConfig& config, std::size_t n,
                                        SelectTrace* trace = nullptr);

}  // namespace voxsel
