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

// Dense row kernels behind the perceptron weight tables.
//
// Weights are stored as rows of `width` doubles, one lane per tag, padded
// to a multiple of kRowAlign. Every kernel is lane-wise with a fixed
// operation order per lane (no horizontal reductions, no FMA), so all
// variants produce bit-identical results to the scalar reference.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace seclabel::simd {

inline constexpr std::size_t kRowAlign = 4;

constexpr std::size_t PaddedWidth(std::size_t lanes) {
  return (lanes + kRowAlign - 1) / kRowAlign * kRowAlign;
}

struct KernelTable {
  std::string_view name;

  // out[0..width) = sum over r in rows of table[r * width .. r * width + width),
  // accumulated in the order rows are listed.
  void (*accumulate_rows)(const double* table, std::size_t width,
                          std::span<const std::uint32_t> rows, double* out);

  // dst[k] += scale * src[k]
  void (*scaled_add)(double* dst, const double* src, double scale, std::size_t n);

  // dst[k] = src[k] / divisor
  void (*divide)(double* dst, const double* src, double divisor, std::size_t n);
};

const KernelTable& ScalarKernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* Avx2Kernels();
const KernelTable* NeonKernels();

// Best supported variant, chosen once. The SECLABEL_KERNELS environment
// variable ("scalar", "avx2", "neon") overrides the choice when supported.
const KernelTable& ActiveKernels();

}  // namespace seclabel::simd
