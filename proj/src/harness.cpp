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

#include "voxsel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "voxsel/error.hpp"
#include "voxsel/metrics.hpp"
#include "voxsel/random.hpp"

namespace voxsel {

void ALConfig::validate() const {
  selection.validate();
  if (!(selection.lambda3 >= per_cloud && per_cloud >= 1)) {
    throw DomainError("need lambda3 >= N_q >= 1, got lambda3=" +
                      std::to_string(selection.lambda3) + " N_q=" + std::to_string(per_cloud));
  }
  if (budget < 1) throw DomainError("annotation budget must be at least one point");
}

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kRunning:
      return "running";
    case RunStatus::kCompleted:
      return "completed";
    case RunStatus::kBudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// LabeledPool

LabeledPool::LabeledPool(std::span<const CloudData> clouds) : clouds_(clouds) {
  labeled_.resize(clouds.size());
  order_.resize(clouds.size());
  for (std::size_t i = 0; i < clouds.size(); ++i) labeled_[i].assign(clouds[i].grid.size(), false);
}

void LabeledPool::label(std::size_t cloud, std::size_t voxel) {
  if (labeled_[cloud][voxel]) {
    throw ConsistencyError("voxel " + std::to_string(voxel) + " of cloud " +
                           std::to_string(cloud) + " is labeled already");
  }
  labeled_[cloud][voxel] = true;
  order_[cloud].push_back(voxel);
}

std::vector<VoxelCoord> LabeledPool::labeled_coords(std::size_t cloud) const {
  std::vector<VoxelCoord> out;
  for (auto v : order_[cloud]) out.push_back(clouds_[cloud].grid.voxel(v).coord);
  return out;
}

std::vector<VoxelCoord> LabeledPool::unlabeled_coords(std::size_t cloud) const {
  std::vector<VoxelCoord> out;
  const auto& grid = clouds_[cloud].grid;
  for (std::size_t v = 0; v < grid.size(); ++v) {
    if (!labeled_[cloud][v]) out.push_back(grid.voxel(v).coord);
  }
  return out;
}

std::vector<PointIndex> LabeledPool::labeled_points(std::size_t cloud) const {
  std::vector<PointIndex> out;
  for (auto v : order_[cloud]) {
    const auto& cell = clouds_[cloud].grid.voxel(v).cell_indices;
    out.insert(out.end(), cell.begin(), cell.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool LabeledPool::is_partition(std::size_t cloud) const {
  const auto& grid = clouds_[cloud].grid;
  if (labeled_[cloud].size() != grid.size()) return false;
  std::vector<bool> seen(grid.size(), false);
  for (auto v : order_[cloud]) {
    if (v >= grid.size() || seen[v] || !labeled_[cloud][v]) return false;
    seen[v] = true;
  }
  const auto n_labeled = static_cast<std::size_t>(
      std::count(labeled_[cloud].begin(), labeled_[cloud].end(), true));
  return n_labeled == order_[cloud].size() &&
         n_labeled + unlabeled_coords(cloud).size() == grid.size();
}

// ---------------------------------------------------------------------------
// ActiveLearner

ActiveLearner::ActiveLearner(std::vector<CloudData> clouds, std::size_t num_classes,
                             ModelConfig model, ALConfig config)
    : clouds_(std::move(clouds)),
      num_classes_(num_classes),
      model_config_(model),
      config_(std::move(config)),
      ledger_(num_classes, config_.budget) {
  config_.validate();
  model_config_.validate();
  for (const auto& c : clouds_) {
    if (!c.cloud.labeled()) {
      throw ConsistencyError("cloud '" + c.cloud.cloud_id + "' has no ground-truth labels");
    }
    c.cloud.validate(num_classes_);
    if (c.features.rows() != c.cloud.size()) {
      throw ConsistencyError("cloud '" + c.cloud.cloud_id + "' has " +
                             std::to_string(c.cloud.size()) + " points but " +
                             std::to_string(c.features.rows()) + " feature rows");
    }
  }
  pool_ = LabeledPool(clouds_);
}

std::uint64_t ActiveLearner::annotated_points() const { return ledger_.total(); }

AnnotatedVoxel ActiveLearner::annotate(std::size_t cloud, std::size_t voxel) {
  const auto& data = clouds_[cloud];
  const Voxel& v = data.grid.voxel(voxel);
  ledger_.spend(v.cell_indices.size());
  pool_.label(cloud, voxel);
  const auto& labels = *data.cloud.labels;
  for (PointIndex k : v.cell_indices) ledger_.add(labels[k]);
  return {cloud, v.coord, v.cell_indices.size(), distinct_labels(v, labels) >= 2};
}

namespace {

RoundReport finish_report(RoundReport r, const LabelLedger& ledger) {
  r.ledger.assign(ledger.per_class().begin(), ledger.per_class().end());
  r.total_labeled = ledger.total();
  r.budget_remaining = ledger.budget_remaining();
  if (!r.annotated.empty()) {
    std::size_t multi = 0;
    for (const auto& a : r.annotated) multi += a.multi_class;
    r.multi_class_fraction = static_cast<double>(multi) / static_cast<double>(r.annotated.size());
  }
  return r;
}

}  // namespace

RoundReport ActiveLearner::initialize() {
  if (initialized_) throw ConsistencyError("active learner is initialized already");
  std::vector<std::size_t> picks(clouds_.size());
  std::uint64_t cost = 0;
  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    const auto& grid = clouds_[i].grid;
    if (grid.empty()) {
      throw DomainError("cloud '" + clouds_[i].cloud.cloud_id + "' has no voxels");
    }
    auto rng = make_rng(config_.init_seed, i);
    std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
    picks[i] = pick(rng);
    cost += grid.voxel(picks[i]).cell_indices.size();
  }
  if (cost > ledger_.budget_remaining()) {
    throw BudgetExhausted("initialization needs " + std::to_string(cost) +
                          " points but the budget is " +
                          std::to_string(ledger_.budget_remaining()));
  }
  RoundReport report;
  report.round = 0;
  for (std::size_t i = 0; i < clouds_.size(); ++i) report.annotated.push_back(annotate(i, picks[i]));
  initialized_ = true;
  if (config_.rounds == 0) status_ = RunStatus::kCompleted;
  if (ledger_.budget_remaining() == 0) status_ = RunStatus::kBudgetExhausted;
  report.status = status_;
  return finish_report(std::move(report), ledger_);
}

PrototypeModel ActiveLearner::fit_model() const {
  std::size_t rows = 0;
  std::vector<std::vector<PointIndex>> labeled(clouds_.size());
  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    labeled[i] = pool_.labeled_points(i);
    rows += labeled[i].size();
  }
  const std::size_t dim = clouds_.empty() ? 0 : clouds_.front().features.cols();
  FeatureMatrix stacked(rows, dim);
  std::vector<ClassId> labels(rows);
  std::vector<PointIndex> all(rows);
  std::size_t r = 0;
  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    for (PointIndex k : labeled[i]) {
      auto src = clouds_[i].features.row(k);
      std::copy(src.begin(), src.end(), stacked.row(r).begin());
      labels[r] = (*clouds_[i].cloud.labels)[k];
      all[r] = static_cast<PointIndex>(r);
      ++r;
    }
  }
  return fit_prototypes(stacked, all, labels, num_classes_);
}

ActiveLearner::Proposal ActiveLearner::propose(std::size_t cloud,
                                               const PrototypeModel& model) const {
  const auto& data = clouds_[cloud];
  const auto pool = pool_.unlabeled_coords(cloud);
  if (pool.empty()) return {};
  ModelConfig mc = model_config_;
  const std::uint64_t stream = (static_cast<std::uint64_t>(round_) << 32) | cloud;
  mc.seed = mix_seed(model_config_.seed, stream);
  const LogitEnsemble ensemble = mc_forward(model, data.features, mc);
  AcquisitionMethod method = config_.method;
  method.seed = mix_seed(config_.method.seed, stream);
  const AcquisitionInputs in{data.grid, data.features, ensemble, ledger_, pool};
  return {rank_candidates(in, method, config_.selection, pool.size())};
}

RoundReport ActiveLearner::run_round() {
  if (!initialized_) throw ConsistencyError("run_round before initialize");
  if (finished()) throw ConsistencyError("run_round after the loop finished");
  ++round_;
  const PrototypeModel model = fit_model();

  // Selection reads only round-start state, so clouds can run concurrently;
  // annotation is merged in cloud order.
  std::vector<Proposal> proposals(clouds_.size());
  parallel_for(clouds_.size(), config_.threads,
               [&](std::size_t i) { proposals[i] = propose(i, model); });

  RoundReport report;
  report.round = round_;
  bool starved = false;
  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    std::size_t taken = 0;
    std::size_t skipped = 0;
    for (const auto& coord : proposals[i].ranked) {
      if (taken == config_.per_cloud) break;
      const std::size_t v = *clouds_[i].grid.index_of(coord);
      if (clouds_[i].grid.voxel(v).cell_indices.size() > ledger_.budget_remaining()) {
        ++skipped;
        continue;
      }
      report.annotated.push_back(annotate(i, v));
      ++taken;
    }
    report.skipped_for_budget += skipped;
    if (skipped > 0 && taken < config_.per_cloud) starved = true;
  }
  selected_voxels_ += report.annotated.size();
  for (const auto& a : report.annotated) selected_multi_ += a.multi_class;

  if (starved || ledger_.budget_remaining() == 0) {
    status_ = RunStatus::kBudgetExhausted;
  } else if (round_ >= config_.rounds) {
    status_ = RunStatus::kCompleted;
  }
  report.status = status_;
  return finish_report(std::move(report), ledger_);
}

EvalMetrics ActiveLearner::evaluate(std::span<const CloudData> heldout) const {
  const PrototypeModel model = fit_model();
  metrics::ConfusionMatrix cm(num_classes_);
  for (const auto& h : heldout) {
    if (!h.cloud.labeled()) {
      throw ConsistencyError("held-out cloud '" + h.cloud.cloud_id + "' has no labels");
    }
    cm.add_all(*h.cloud.labels, predict(model, h.features));
  }
  EvalMetrics m;
  m.class_accuracy = metrics::accuracy_per_class(cm);
  m.macro_accuracy = metrics::mean_of_present(m.class_accuracy);
  m.class_iou = metrics::iou_per_class(cm);
  m.mean_iou = metrics::mean_of_present(m.class_iou);
  m.labeled_entropy = ledger_.total() > 0 ? metrics::distribution_entropy(ledger_.per_class()) : 0.0;
  m.selected_voxels = selected_voxels_;
  if (selected_voxels_ > 0) {
    m.selected_multi_class_fraction =
        static_cast<double>(selected_multi_) / static_cast<double>(selected_voxels_);
  }
  m.evaluated_points = cm.total();
  return m;
}

}  // namespace voxsel
