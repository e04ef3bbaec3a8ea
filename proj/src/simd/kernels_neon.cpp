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

// NEON kernels (AArch64, where Advanced SIMD is mandatory).

#include "seclabel/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace seclabel::simd {
namespace {

void AccumulateRowsNeon(const double* table, std::size_t width,
                        std::span<const std::uint32_t> rows, double* out) {
  std::size_t k = 0;
  for (; k + 4 <= width; k += 4) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    for (std::uint32_t r : rows) {
      const double* row = table + static_cast<std::size_t>(r) * width + k;
      acc0 = vaddq_f64(acc0, vld1q_f64(row));
      acc1 = vaddq_f64(acc1, vld1q_f64(row + 2));
    }
    vst1q_f64(out + k, acc0);
    vst1q_f64(out + k + 2, acc1);
  }
  for (; k < width; ++k) {
    double acc = 0.0;
    for (std::uint32_t r : rows) acc += table[static_cast<std::size_t>(r) * width + k];
    out[k] = acc;
  }
}

void ScaledAddNeon(double* dst, const double* src, double scale, std::size_t n) {
  const float64x2_t s = vdupq_n_f64(scale);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    // Separate multiply and add; vfmaq would round differently.
    float64x2_t term = vmulq_f64(s, vld1q_f64(src + k));
    vst1q_f64(dst + k, vaddq_f64(vld1q_f64(dst + k), term));
  }
  for (; k < n; ++k) {
    double term = scale * src[k];
    dst[k] += term;
  }
}

void DivideNeon(double* dst, const double* src, double divisor, std::size_t n) {
  const float64x2_t d = vdupq_n_f64(divisor);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(dst + k, vdivq_f64(vld1q_f64(src + k), d));
  for (; k < n; ++k) dst[k] = src[k] / divisor;
}

}  // namespace

const KernelTable* NeonKernels() {
  static const KernelTable table{"neon", AccumulateRowsNeon, ScaledAddNeon, DivideNeon};
  return &table;
}

}  // namespace seclabel::simd

#else

namespace seclabel::simd {
const KernelTable* NeonKernels() { return nullptr; }
}  // namespace seclabel::simd

#endif
