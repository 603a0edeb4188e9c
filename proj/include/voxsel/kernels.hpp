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

// Data-parallel inner loops with a scalar reference implementation and
// vectorized variants picked at runtime from the host CPU. Every variant must
// agree with the scalar kernel: bit-exactly for floor_div_coords and
// accumulate_row, within rounding for the reductions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "voxsel/types.hpp"

namespace voxsel::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // out[3k..3k+2] = floor((x, y, z) / lambda) for each point. Returns false,
  // with *first_bad set, when a quotient is non-finite or outside int32.
  bool (*floor_div_coords)(const Point* points, std::size_t n, double lambda,
                           std::int32_t* out, std::size_t* first_bad);
  // acc[d] += row[d]
  void (*accumulate_row)(double* acc, const float* row, std::size_t dim);
  // sum_d (scale[d] * (a[d] - b[d]))^2
  double (*masked_sq_distance)(const float* a, const float* b,
                               const double* scale, std::size_t dim);
  // Population variance of v[0..dim).
  double (*population_variance)(const double* v, std::size_t dim);
};

const KernelTable& scalar_table();
// nullptr when the ISA was not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);

bool available(Isa isa);
Isa best_available();

// The table used by the library. Defaults to best_available(); tests and the
// CLI may pin a specific ISA. Throws DomainError if `isa` is unavailable.
const KernelTable& active();
void set_active(Isa isa);

inline bool floor_div_coords(std::span<const Point> points, double lambda,
                             std::span<std::int32_t> out, std::size_t* first_bad) {
  return active().floor_div_coords(points.data(), points.size(), lambda, out.data(),
                                   first_bad);
}
inline void accumulate_row(std::span<double> acc, std::span<const float> row) {
  active().accumulate_row(acc.data(), row.data(), row.size());
}
inline double masked_sq_distance(std::span<const float> a, std::span<const float> b,
                                 std::span<const double> scale) {
  return active().masked_sq_distance(a.data(), b.data(), scale.data(), a.size());
}
inline double population_variance(std::span<const double> v) {
  return active().population_variance(v.data(), v.size());
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(VOXSEL_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace voxsel::kernels
