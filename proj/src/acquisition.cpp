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

#include "voxsel/acquisition.hpp"

#include <algorithm>
#include <string>

#include "voxsel/error.hpp"

namespace voxsel {

std::string_view method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::kSelect:
      return "select";
    case MethodKind::kRandom:
      return "random";
    case MethodKind::kEntropy:
      return "entropy";
    case MethodKind::kMargin:
      return "margin";
    case MethodKind::kVcd:
      return "vcd";
  }
  return "unknown";
}

MethodKind parse_method(std::string_view name) {
  for (auto k : {MethodKind::kSelect, MethodKind::kRandom, MethodKind::kEntropy,
                 MethodKind::kMargin, MethodKind::kVcd}) {
    if (method_name(k) == name) return k;
  }
  throw DomainError("unknown acquisition method '" + std::string(name) + "'");
}

void SelectionConfig::validate() const {
  if (!(lambda1 >= lambda2 && lambda2 >= lambda3 && lambda3 >= 1)) {
    throw DomainError("stage sizes must satisfy lambda1 >= lambda2 >= lambda3 >= 1, got " +
                      std::to_string(lambda1) + "/" + std::to_string(lambda2) + "/" +
                      std::to_string(lambda3));
  }
}

std::vector<VoxelCoord> select_pipeline(const AcquisitionInputs& in,
                                        const SelectionConfig& config, std::uint64_t seed,
                                        SelectTrace* trace) {
  config.validate();
  SelectTrace local;
  SelectTrace& t = trace ? *trace : local;
  t = SelectTrace{};

  const auto& st = config.stages;
  std::vector<VoxelCoord> current;
  if (!st.representative && !st.uncertainty && !st.balance) {
    return baselines::random_select(in.pool, in.pool.size(), seed);
  }

  if (st.representative) {
    t.stage1_scores.reserve(in.pool.size());
    for (const auto& c : in.pool) {
      t.stage1_scores.push_back(stage1::score_voxel(in.features, in.grid.at(c), config.variance));
    }
    t.stage1 = stage1::select_stage1(t.stage1_scores, config.lambda1);
    current = t.stage1;
  } else {
    current.assign(in.pool.begin(), in.pool.end());
    std::sort(current.begin(), current.end());
  }

  if (st.uncertainty) {
    t.stage2_scores.reserve(current.size());
    for (const auto& c : current) {
      t.stage2_scores.push_back(stage2::score_voxel(in.ensemble, in.grid.at(c)));
    }
    t.stage2 = stage2::select_stage2(t.stage2_scores, config.lambda2);
    current = t.stage2;
  }

  if (st.balance) {
    t.stage3_candidates.reserve(current.size());
    for (const auto& c : current) {
      t.stage3_candidates.push_back(stage3::make_candidate(in.ensemble, in.grid.at(c)));
    }
    t.stage3 = stage3::greedy_balance(in.ledger, t.stage3_candidates, config.lambda3,
                                      config.balance_entropy);
    current.clear();
    for (const auto& s : t.stage3) current.push_back(s.coord);
  }
  return current;
}

std::vector<VoxelCoord> rank_candidates(const AcquisitionInputs& in,
                                        const AcquisitionMethod& method,
                                        const SelectionConfig& config, std::size_t n,
                                        SelectTrace* trace) {
  switch (method.kind) {
    case MethodKind::kSelect:
      return select_pipeline(in, config, method.seed, trace);
    case MethodKind::kRandom:
      return baselines::random_select(in.pool, n, method.seed);
    case MethodKind::kEntropy:
      return baselines::entropy_select(in.ensemble, in.grid, in.pool, n,
                                       config.entropy_aggregation);
    case MethodKind::kMargin:
      return baselines::margin_select(in.ensemble, in.grid, in.pool, n);
    case MethodKind::kVcd:
      return baselines::vcd_select(in.ensemble, in.grid, in.pool, n);
  }
  throw DomainError("unhandled acquisition method");
}

}  // namespace voxsel
