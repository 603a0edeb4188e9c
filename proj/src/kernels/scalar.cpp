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
#include <cstdint>
#include <limits>

#include "voxsel/kernels.hpp"

namespace voxsel::kernels {
namespace {

bool to_cell(double q, std::int32_t* out) {
  const double f = std::floor(q);
  if (!(f >= static_cast<double>(std::numeric_limits<std::int32_t>::min()) &&
        f <= static_cast<double>(std::numeric_limits<std::int32_t>::max()))) {
    return false;
  }
  *out = static_cast<std::int32_t>(f);
  return true;
}

bool floor_div_coords_scalar(const Point* points, std::size_t n, double lambda,
                             std::int32_t* out, std::size_t* first_bad) {
  for (std::size_t k = 0; k < n; ++k) {
    const Point& p = points[k];
    if (!to_cell(static_cast<double>(p.x) / lambda, out + 3 * k) ||
        !to_cell(static_cast<double>(p.y) / lambda, out + 3 * k + 1) ||
        !to_cell(static_cast<double>(p.z) / lambda, out + 3 * k + 2)) {
      if (first_bad) *first_bad = k;
      return false;
    }
  }
  return true;
}

void accumulate_row_scalar(double* acc, const float* row, std::size_t dim) {
  for (std::size_t d = 0; d < dim; ++d) acc[d] += static_cast<double>(row[d]);
}

double masked_sq_distance_scalar(const float* a, const float* b, const double* scale,
                                 std::size_t dim) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double t = scale[d] * (static_cast<double>(a[d]) - static_cast<double>(b[d]));
    acc += t * t;
  }
  return acc;
}

double population_variance_scalar(const double* v, std::size_t dim) {
  if (dim == 0) return 0.0;
  double mean = 0.0;
  for (std::size_t d = 0; d < dim; ++d) mean += v[d];
  mean /= static_cast<double>(dim);
  double ss = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double t = v[d] - mean;
    ss += t * t;
  }
  return ss / static_cast<double>(dim);
}

}  // namespace

namespace detail {
const KernelTable kScalarTable = {
    Isa::kScalar,
    &floor_div_coords_scalar,
    &accumulate_row_scalar,
    &masked_sq_distance_scalar,
    &population_variance_scalar,
};
}  // namespace detail

}  // namespace voxsel::kernels
