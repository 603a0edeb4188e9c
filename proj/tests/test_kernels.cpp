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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "support.hpp"
#include "voxsel/error.hpp"
#include "voxsel/kernels.hpp"

using namespace voxsel;
using namespace voxsel::kernels;

namespace {

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::kAvx2}) {
    if (const auto* t = table_for(isa)) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dispatch") {
  CHECK(available(Isa::kScalar));
  CHECK(table_for(Isa::kScalar) == &scalar_table());
  CHECK(isa_name(Isa::kScalar) == "scalar");
  const Isa before = active().isa;
  set_active(Isa::kScalar);
  CHECK(active().isa == Isa::kScalar);
  set_active(best_available());
  CHECK(active().isa == best_available());
  if (!available(Isa::kAvx2)) CHECK_THROWS_AS(set_active(Isa::kAvx2), DomainError);
  set_active(before);
}

TEST_CASE("scalar floor division matches the oracle") {
  const auto pts = testing::random_points(1001, 50.0, 1);
  std::vector<std::int32_t> out(3 * pts.size());
  std::size_t bad = 0;
  REQUIRE(scalar_table().floor_div_coords(pts.data(), pts.size(), 0.25, out.data(), &bad));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto o = oracle::floor_cell(pts[k], 0.25);
    CHECK(out[3 * k] == o[0]);
    CHECK(out[3 * k + 1] == o[1]);
    CHECK(out[3 * k + 2] == o[2]);
  }
}

TEST_CASE("vector floor division is bit identical to scalar") {
  for (const auto* t : vector_tables()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1003u}) {
      auto pts = testing::random_points(n, 100.0, 40 + n);
      // exact cell boundaries and negative zero
      if (n > 3) {
        pts[0] = {-0.0f, 0.25f, -0.25f, 0};
        pts[1] = {-0.5f, 0.75f, 1e-8f, 0};
      }
      for (double lambda : {0.05, 0.25, 0.5, 0.75, 1.0 / 3.0}) {
        std::vector<std::int32_t> a(3 * n, 0), b(3 * n, 0);
        std::size_t ba = 0, bb = 0;
        REQUIRE(scalar_table().floor_div_coords(pts.data(), n, lambda, a.data(), &ba));
        REQUIRE(t->floor_div_coords(pts.data(), n, lambda, b.data(), &bb));
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("floor division reports the first bad point") {
  std::vector<const KernelTable*> tables = vector_tables();
  tables.push_back(&scalar_table());
  for (const auto* t : tables) {
    auto pts = testing::random_points(10, 5.0, 2);
    pts[6].y = std::numeric_limits<float>::quiet_NaN();
    pts[8].x = 1e30f;
    std::vector<std::int32_t> out(30);
    std::size_t bad = 0;
    CHECK_FALSE(t->floor_div_coords(pts.data(), pts.size(), 0.25, out.data(), &bad));
    CHECK(bad == 6);
    pts[6].y = 0;
    CHECK_FALSE(t->floor_div_coords(pts.data(), pts.size(), 0.25, out.data(), &bad));
    CHECK(bad == 8);
    // reflectance does not take part in the coordinate
    pts[8].x = 0;
    pts[3].r = std::numeric_limits<float>::infinity();
    CHECK(t->floor_div_coords(pts.data(), pts.size(), 0.25, out.data(), &bad));
  }
}

TEST_CASE("accumulate_row is bit identical") {
  for (const auto* t : vector_tables()) {
    for (std::size_t dim : {1u, 3u, 4u, 5u, 8u, 16u, 17u, 33u}) {
      const auto rows = testing::random_matrix(20, dim, dim, -1e4f, 1e4f);
      std::vector<double> a(dim, 0.5), b(dim, 0.5);
      for (std::size_t r = 0; r < rows.rows(); ++r) {
        scalar_table().accumulate_row(a.data(), rows.row(r).data(), dim);
        t->accumulate_row(b.data(), rows.row(r).data(), dim);
      }
      CHECK(a == b);
    }
  }
}

TEST_CASE("reductions agree within rounding") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto* t : vector_tables()) {
    for (std::size_t dim : {1u, 2u, 4u, 7u, 16u, 31u, 64u}) {
      const auto a = testing::random_matrix(1, dim, 100 + dim, -10, 10);
      const auto b = testing::random_matrix(1, dim, 200 + dim, -10, 10);
      std::vector<double> scale(dim), v(dim);
      for (auto& s : scale) s = u(rng) < 0.2 ? 0.0 : 1.25;
      for (auto& x : v) x = u(rng) * 100 - 50;
      const double ds = scalar_table().masked_sq_distance(a.row(0).data(), b.row(0).data(),
                                                          scale.data(), dim);
      const double dv = t->masked_sq_distance(a.row(0).data(), b.row(0).data(), scale.data(), dim);
      CHECK(dv == doctest::Approx(ds).epsilon(1e-12));
      const double vs = scalar_table().population_variance(v.data(), dim);
      const double vv = t->population_variance(v.data(), dim);
      CHECK(vv == doctest::Approx(vs).epsilon(1e-12));
      CHECK(vs == doctest::Approx(oracle::two_pass_variance(v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("scalar reductions match direct formulas") {
  const float a[3] = {1, 2, 3};
  const float b[3] = {0, 4, 3};
  const double s[3] = {2, 0.5, 7};
  CHECK(scalar_table().masked_sq_distance(a, b, s, 3) == doctest::Approx(4.0 + 1.0));
  const double v[2] = {0, 2};
  CHECK(scalar_table().population_variance(v, 2) == 1.0);
  const double c[4] = {3, 3, 3, 3};
  CHECK(scalar_table().population_variance(c, 4) == 0.0);
}

}  // TEST_SUITE
