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

// Structured text records. Every record is one JSON object per line with a
// "type" field; see README.md for the field reference.

#include <ostream>

#include "json.hpp"

#include "voxsel/harness.hpp"
#include "voxsel/simulate.hpp"

namespace voxsel::report {

nlohmann::json to_json(const VoxelCoord& c);
nlohmann::json to_json(const RoundReport& r);
nlohmann::json to_json(const EvalMetrics& m);
nlohmann::json summary(const SimulationResult& result);

// One "round" record per entry of result.rounds followed by a "summary".
void write_simulation(std::ostream& os, const SimulationResult& result);

}  // namespace voxsel::report
