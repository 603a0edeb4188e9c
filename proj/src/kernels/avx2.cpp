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

// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include <cstdint>
#include <limits>

#include "voxsel/kernels.hpp"

namespace voxsel::kernels {
namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// One point per iteration: the (x, y, z, r) quadruple fills a 4-wide double
// vector, the r lane is ignored.
bool floor_div_coords_avx2(const Point* points, std::size_t n, double lambda,
                           std::int32_t* out, std::size_t* first_bad) {
  static_assert(sizeof(Point) == 16);
  const __m256d div = _mm256_set1_pd(lambda);
  const __m256d lo = _mm256_set1_pd(static_cast<double>(std::numeric_limits<std::int32_t>::min()));
  const __m256d hi = _mm256_set1_pd(static_cast<double>(std::numeric_limits<std::int32_t>::max()));
  for (std::size_t k = 0; k < n; ++k) {
    const __m128 p = _mm_loadu_ps(reinterpret_cast<const float*>(points + k));
    const __m256d q = _mm256_floor_pd(_mm256_div_pd(_mm256_cvtps_pd(p), div));
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(q, lo, _CMP_GE_OQ),
                                     _mm256_cmp_pd(q, hi, _CMP_LE_OQ));
    if ((_mm256_movemask_pd(ok) & 0x7) != 0x7) {
      if (first_bad) *first_bad = k;
      return false;
    }
    alignas(16) std::int32_t cells[4];
    _mm_store_si128(reinterpret_cast<__m128i*>(cells), _mm256_cvttpd_epi32(q));
    out[3 * k] = cells[0];
    out[3 * k + 1] = cells[1];
    out[3 * k + 2] = cells[2];
  }
  return true;
}

void accumulate_row_avx2(double* acc, const float* row, std::size_t dim) {
  std::size_t d = 0;
  for (; d + 4 <= dim; d += 4) {
    const __m256d r = _mm256_cvtps_pd(_mm_loadu_ps(row + d));
    _mm256_storeu_pd(acc + d, _mm256_add_pd(_mm256_loadu_pd(acc + d), r));
  }
  for (; d < dim; ++d) acc[d] += static_cast<double>(row[d]);
}

double masked_sq_distance_avx2(const float* a, const float* b, const double* scale,
                               std::size_t dim) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t d = 0;
  for (; d + 4 <= dim; d += 4) {
    const __m256d va = _mm256_cvtps_pd(_mm_loadu_ps(a + d));
    const __m256d vb = _mm256_cvtps_pd(_mm_loadu_ps(b + d));
    const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(scale + d), _mm256_sub_pd(va, vb));
    acc = _mm256_fmadd_pd(t, t, acc);
  }
  double total = hsum(acc);
  for (; d < dim; ++d) {
    const double t = scale[d] * (static_cast<double>(a[d]) - static_cast<double>(b[d]));
    total += t * t;
  }
  return total;
}

double population_variance_avx2(const double* v, std::size_t dim) {
  if (dim == 0) return 0.0;
  __m256d sum = _mm256_setzero_pd();
  std::size_t d = 0;
  for (; d + 4 <= dim; d += 4) sum = _mm256_add_pd(sum, _mm256_loadu_pd(v + d));
  double total = hsum(sum);
  for (std::size_t i = d; i < dim; ++i) total += v[i];
  const double mean = total / static_cast<double>(dim);

  const __m256d vm = _mm256_set1_pd(mean);
  __m256d ss = _mm256_setzero_pd();
  for (d = 0; d + 4 <= dim; d += 4) {
    const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(v + d), vm);
    ss = _mm256_fmadd_pd(t, t, ss);
  }
  double sq = hsum(ss);
  for (; d < dim; ++d) {
    const double t = v[d] - mean;
    sq += t * t;
  }
  return sq / static_cast<double>(dim);
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table = {
    Isa::kAvx2,
    &floor_div_coords_avx2,
    &accumulate_row_avx2,
    &masked_sq_distance_avx2,
    &population_variance_avx2,
};
}  // namespace detail

}  // namespace voxsel::kernels
