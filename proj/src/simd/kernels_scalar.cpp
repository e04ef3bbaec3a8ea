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

// Reference kernels. Every SIMD variant is tested for exact equality
// against these.

#include "seclabel/simd/kernels.hpp"

namespace seclabel::simd {
namespace {

void AccumulateRowsScalar(const double* table, std::size_t width,
                          std::span<const std::uint32_t> rows, double* out) {
  for (std::size_t k = 0; k < width; ++k) out[k] = 0.0;
  for (std::uint32_t r : rows) {
    const double* row = table + static_cast<std::size_t>(r) * width;
    for (std::size_t k = 0; k < width; ++k) out[k] += row[k];
  }
}

void ScaledAddScalar(double* dst, const double* src, double scale, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    double term = scale * src[k];
    dst[k] += term;
  }
}

void DivideScalar(double* dst, const double* src, double divisor, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) dst[k] = src[k] / divisor;
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{"scalar", AccumulateRowsScalar, ScaledAddScalar, DivideScalar};
  return table;
}

}  // namespace seclabel::simd
