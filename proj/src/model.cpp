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

#include "voxsel/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "voxsel/error.hpp"
#include "voxsel/io.hpp"
#include "voxsel/kernels.hpp"
#include "voxsel/random.hpp"

namespace voxsel {

void ModelConfig::validate() const {
  if (passes < 1) throw DomainError("model needs at least one stochastic pass");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw DomainError("dropout rate must be in [0, 1), got " + std::to_string(dropout));
  }
  if (feature_dim < 1) throw DomainError("feature dimension must be positive");
}

std::size_t PrototypeModel::defined_count() const {
  std::size_t n = 0;
  for (auto c : counts) n += c > 0;
  return n;
}

PrototypeModel fit_prototypes(const FeatureMatrix& features,
                              std::span<const PointIndex> labeled_indices,
                              std::span<const ClassId> labels, std::size_t num_classes) {
  const std::size_t dim = features.cols();
  std::vector<double> sums(num_classes * dim, 0.0);
  PrototypeModel model;
  model.counts.assign(num_classes, 0);
  for (PointIndex k : labeled_indices) {
    if (k >= features.rows() || k >= labels.size()) {
      throw ConsistencyError("labeled point " + std::to_string(k) + " is out of range");
    }
    const ClassId c = labels[k];
    if (c >= num_classes) {
      throw DataError("label " + std::to_string(c) + " is not below class count " +
                      std::to_string(num_classes));
    }
    kernels::accumulate_row(std::span<double>(sums.data() + c * dim, dim), features.row(k));
    ++model.counts[c];
  }
  model.prototypes = Matrix(num_classes, dim);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (model.counts[c] == 0) continue;
    const double inv = 1.0 / static_cast<double>(model.counts[c]);
    for (std::size_t d = 0; d < dim; ++d) {
      model.prototypes(c, d) = static_cast<float>(sums[c * dim + d] * inv);
    }
  }
  return model;
}

std::vector<double> dropout_scale(std::uint64_t seed, std::size_t pass, std::size_t dim,
                                  double dropout) {
  std::vector<double> scale(dim, 1.0);
  if (dropout == 0.0) return scale;
  auto rng = make_rng(seed, pass);
  std::bernoulli_distribution keep(1.0 - dropout);
  const double inv = 1.0 / (1.0 - dropout);
  for (auto& s : scale) s = keep(rng) ? inv : 0.0;
  return scale;
}

namespace {

void require_compatible(const PrototypeModel& model, const FeatureMatrix& features) {
  if (model.defined_count() == 0) throw ModelError("model has no defined class prototype");
  if (features.cols() != model.feature_dim()) {
    throw ConsistencyError("feature dimension " + std::to_string(features.cols()) +
                           " does not match model dimension " +
                           std::to_string(model.feature_dim()));
  }
}

Matrix forward_pass(const PrototypeModel& model, const FeatureMatrix& features,
                    std::span<const double> scale) {
  const std::size_t n = features.rows();
  const std::size_t classes = model.num_classes();
  Matrix logits(n, classes);
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < n; ++i) {
    const float* f = features.row(i).data();
    for (std::size_t c = 0; c < classes; ++c) {
      logits(i, c) = model.defined(c)
                         ? static_cast<float>(-k.masked_sq_distance(
                               f, model.prototypes.row(c).data(), scale.data(),
                               features.cols()))
                         : kUndefinedClassLogit;
    }
  }
  return logits;
}

}  // namespace

LogitEnsemble mc_forward(const PrototypeModel& model, const FeatureMatrix& features,
                         const ModelConfig& config) {
  config.validate();
  require_compatible(model, features);
  std::vector<Matrix> passes;
  passes.reserve(config.passes);
  for (std::size_t t = 0; t < config.passes; ++t) {
    const auto scale = dropout_scale(config.seed, t, features.cols(), config.dropout);
    passes.push_back(forward_pass(model, features, scale));
  }
  return make_ensemble(std::move(passes));
}

std::vector<ClassId> predict(const PrototypeModel& model, const FeatureMatrix& features) {
  require_compatible(model, features);
  const std::vector<double> scale(features.cols(), 1.0);
  const Matrix logits = forward_pass(model, features, scale);
  std::vector<ClassId> out(features.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<ClassId>(argmax_first(logits.row(i)));
  }
  return out;
}

MockFeatureProvider::MockFeatureProvider(std::size_t dim, std::uint64_t seed,
                                         double coord_scale)
    : dim_(dim), coord_scale_(coord_scale) {
  if (dim < 4) throw DomainError("mock features need at least 4 dimensions");
  if (!(coord_scale > 0.0)) throw DomainError("coordinate scale must be positive");
  projection_.resize((dim - 4) * 3);
  auto rng = make_rng(seed, 0xFEA7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& w : projection_) w = normal(rng);
}

FeatureMatrix MockFeatureProvider::features(const PointCloud& cloud) const {
  FeatureMatrix out(cloud.size(), dim_);
  const double inv = 1.0 / coord_scale_;
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const Point& p = cloud.points[k];
    const double pos[3] = {p.x * inv, p.y * inv, p.z * inv};
    auto row = out.row(k);
    row[0] = static_cast<float>(pos[0]);
    row[1] = static_cast<float>(pos[1]);
    row[2] = static_cast<float>(pos[2]);
    row[3] = p.r;
    for (std::size_t j = 0; j + 4 < dim_; ++j) {
      const double* w = projection_.data() + 3 * j;
      row[4 + j] = static_cast<float>(w[0] * pos[0] + w[1] * pos[1] + w[2] * pos[2]);
    }
  }
  return out;
}

FeatureMatrix FileFeatureProvider::features(const PointCloud& cloud) const {
  FeatureMatrix m = io::read_matrix(path_);
  if (m.rows() != cloud.size()) {
    throw ConsistencyError(path_.string() + ": feature matrix has " +
                           std::to_string(m.rows()) + " rows but cloud '" +
                           cloud.cloud_id + "' has " + std::to_string(cloud.size()) +
                           " points");
  }
  m.require_finite(path_.string().c_str());
  return m;
}

LogitEnsemble load_logit_passes(std::span<const std::filesystem::path> paths,
                                std::size_t expected_rows, std::size_t num_classes) {
  if (paths.empty()) throw ConsistencyError("no logit pass files given");
  std::vector<Matrix> passes;
  for (const auto& p : paths) {
    Matrix m = io::read_matrix(p);
    if (m.rows() != expected_rows || m.cols() != num_classes) {
      throw ConsistencyError(p.string() + ": logits are " + std::to_string(m.rows()) +
                             "x" + std::to_string(m.cols()) + ", expected " +
                             std::to_string(expected_rows) + "x" +
                             std::to_string(num_classes));
    }
    m.require_finite(p.string().c_str());
    passes.push_back(std::move(m));
  }
  return make_ensemble(std::move(passes));
}

}  // namespace voxsel
