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

#include "voxsel/report.hpp"

namespace voxsel::report {
namespace {

nlohmann::json optional_list(const std::vector<std::optional<double>>& values) {
  auto out = nlohmann::json::array();
  for (const auto& v : values) out.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
  return out;
}

nlohmann::json optional_value(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const VoxelCoord& c) { return {c.x, c.y, c.z}; }

nlohmann::json to_json(const RoundReport& r) {
  nlohmann::json j;
  j["type"] = "round";
  j["round"] = r.round;
  j["status"] = status_name(r.status);
  auto sel = nlohmann::json::array();
  for (const auto& a : r.annotated) {
    sel.push_back({{"cloud", a.cloud},
                   {"coord", to_json(a.coord)},
                   {"points", a.points},
                   {"multi_class", a.multi_class}});
  }
  j["annotated"] = std::move(sel);
  j["skipped_for_budget"] = r.skipped_for_budget;
  j["class_counts"] = r.ledger;
  j["total_labeled"] = r.total_labeled;
  j["budget_remaining"] = r.budget_remaining;
  j["multi_class_fraction"] = optional_value(r.multi_class_fraction);
  return j;
}

nlohmann::json to_json(const EvalMetrics& m) {
  nlohmann::json j;
  j["class_accuracy"] = optional_list(m.class_accuracy);
  j["macro_accuracy"] = optional_value(m.macro_accuracy);
  j["class_iou"] = optional_list(m.class_iou);
  j["mean_iou"] = optional_value(m.mean_iou);
  j["labeled_entropy"] = m.labeled_entropy;
  j["selected_voxels"] = m.selected_voxels;
  j["selected_multi_class_fraction"] = optional_value(m.selected_multi_class_fraction);
  j["evaluated_points"] = m.evaluated_points;
  return j;
}

nlohmann::json summary(const SimulationResult& result) {
  nlohmann::json j;
  j["type"] = "summary";
  j["method"] = result.method;
  j["status"] = status_name(result.status);
  j["rounds_completed"] = result.rounds_completed;
  j["budget"] = result.budget;
  j["total_labeled"] = result.total_labeled;
  j["metrics"] = to_json(result.metrics);
  return j;
}

void write_simulation(std::ostream& os, const SimulationResult& result) {
  for (const auto& r : result.rounds) os << to_json(r).dump() << '\n';
  os << summary(result).dump() << '\n';
}

}  // namespace voxsel::report
