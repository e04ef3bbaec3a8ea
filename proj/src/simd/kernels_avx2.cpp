// Copyright 2026 The seclabel Authors.
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

// AVX2 kernels. This file is built with -mavx2 and only entered after a
// runtime CPU check.

#include "seclabel/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace seclabel::simd {
namespace {

void AccumulateRowsAvx2(const double* table, std::size_t width,
                        std::span<const std::uint32_t> rows, double* out) {
  std::size_t k = 0;
  // Two-register fast path covers the 8-lane domain rows.
  for (; k + 8 <= width; k += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::uint32_t r : rows) {
      const double* row = table + static_cast<std::size_t>(r) * width + k;
      acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(row));
      acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(row + 4));
    }
    _mm256_storeu_pd(out + k, acc0);
    _mm256_storeu_pd(out + k + 4, acc1);
  }
  for (; k + 4 <= width; k += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::uint32_t r : rows) {
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(table + static_cast<std::size_t>(r) * width + k));
    }
    _mm256_storeu_pd(out + k, acc);
  }
  for (; k < width; ++k) {
    double acc = 0.0;
    for (std::uint32_t r : rows) acc += table[static_cast<std::size_t>(r) * width + k];
    out[k] = acc;
  }
}

void ScaledAddAvx2(double* dst, const double* src, double scale, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d term = _mm256_mul_pd(s, _mm256_loadu_pd(src + k));
    _mm256_storeu_pd(dst + k, _mm256_add_pd(_mm256_loadu_pd(dst + k), term));
  }
  for (; k < n; ++k) {
    double term = scale * src[k];
    dst[k] += term;
  }
}

void DivideAvx2(double* dst, const double* src, double divisor, std::size_t n) {
  const __m256d d = _mm256_set1_pd(divisor);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(dst + k, _mm256_div_pd(_mm256_loadu_pd(src + k), d));
  }
  for (; k < n; ++k) dst[k] = src[k] / divisor;
}

}  // namespace

const KernelTable* Avx2Kernels() {
  static const KernelTable table{"avx2", AccumulateRowsAvx2, ScaledAddAvx2, DivideAvx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace seclabel::simd

#else

namespace seclabel::simd {
const KernelTable* Avx2Kernels() { return nullptr; }
}  // namespace seclabel::simd

#endif
