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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "voxsel/error.hpp"
#include "voxsel/metrics.hpp"

using namespace voxsel;
using namespace voxsel::metrics;

TEST_SUITE("metrics_report") {

TEST_CASE("diagonal confusion") {
  ConfusionMatrix cm(3);
  cm.add(0, 0, 5);
  cm.add(2, 2, 1);
  const auto iou = iou_per_class(cm);
  CHECK(iou[0] == 1.0);
  CHECK_FALSE(iou[1].has_value());
  CHECK(iou[2] == 1.0);
  CHECK(mean_of_present(iou) == 1.0);
  CHECK(cm.total() == 6);
}

TEST_CASE("iou arithmetic") {
  // class 0: TP 1, FP 1, FN 2
  ConfusionMatrix cm(2);
  cm.add(0, 0, 1);
  cm.add(1, 0, 1);
  cm.add(0, 1, 2);
  CHECK(cm.true_positives(0) == 1);
  CHECK(cm.false_positives(0) == 1);
  CHECK(cm.false_negatives(0) == 2);
  CHECK(*iou_per_class(cm)[0] == doctest::Approx(0.25));
}

TEST_CASE("iou matches a set oracle") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<ClassId> truth(300), pred(300);
    for (std::size_t k = 0; k < 300; ++k) {
      truth[k] = rng() % 5;
      pred[k] = rng() % 3 == 0 ? truth[k] : ClassId(rng() % 4);
    }
    ConfusionMatrix cm(5);
    cm.add_all(truth, pred);
    const auto iou = iou_per_class(cm);
    const auto o = oracle::set_iou(truth, pred, 5);
    for (std::size_t c = 0; c < 5; ++c) {
      if (o[c] < 0) {
        CHECK_FALSE(iou[c].has_value());
      } else {
        REQUIRE(iou[c].has_value());
        CHECK(*iou[c] == doctest::Approx(o[c]).epsilon(1e-12));
      }
    }
    const auto m = mean_of_present(iou);
    double lo = 1, hi = 0;
    for (const auto& v : iou) {
      if (v) lo = std::min(lo, *v), hi = std::max(hi, *v);
    }
    CHECK(*m >= lo);
    CHECK(*m <= hi);
  }
}

TEST_CASE("accuracy of degenerate predictors") {
  std::vector<ClassId> truth = {0, 0, 1, 1};
  ConfusionMatrix perfect(2);
  perfect.add_all(truth, truth);
  CHECK(mean_of_present(accuracy_per_class(perfect)) == 1.0);
  CHECK(mean_of_present(iou_per_class(perfect)) == 1.0);
  ConfusionMatrix constant(2);
  constant.add_all(truth, std::vector<ClassId>(4, 0));
  CHECK(*mean_of_present(accuracy_per_class(constant)) == doctest::Approx(0.5));
  CHECK(constant.support(1) == 2);

  ConfusionMatrix cm(2);
  CHECK_THROWS_AS(cm.add_all(truth, std::vector<ClassId>(3, 0)), ConsistencyError);
  CHECK_THROWS_AS(cm.add_all(truth, std::vector<ClassId>{0, 0, 0, 2}), DataError);
  CHECK_FALSE(mean_of_present(accuracy_per_class(cm)).has_value());
}

TEST_CASE("distribution entropy") {
  const std::vector<std::uint64_t> one = {0, 12, 0};
  CHECK(distribution_entropy(one) == 0.0);
  const std::vector<std::uint64_t> u13(13, 7);
  CHECK(distribution_entropy(u13) == doctest::Approx(std::log(13.0)).epsilon(1e-12));
  CHECK(std::abs(std::log(13.0) - 2.5649) < 1e-4);
  const std::vector<std::uint64_t> zero(3, 0);
  CHECK_THROWS_AS(distribution_entropy(zero), DomainError);

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::uint64_t> counts(8);
    for (auto& c : counts) c = rng() % 100;
    counts[0] += 1;
    double total = 0;
    for (auto c : counts) total += double(c);
    std::vector<double> p;
    for (auto c : counts) p.push_back(double(c) / total);
    const double h = distribution_entropy(counts);
    CHECK(std::abs(h - oracle::shannon(p)) < 1e-9);
    CHECK(h <= std::log(8.0) + 1e-12);
    auto perm = counts;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(std::abs(distribution_entropy(perm) - h) < 1e-12);
  }
}

}  // TEST_SUITE
