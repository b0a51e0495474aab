// Copyright 2026 The rsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense level-1/level-2 kernels used by every solver inner loop.
//
// Each kernel has a scalar reference implementation plus AVX2/FMA and NEON
// variants. The variant is picked once per process from the host CPU;
// RSP_KERNELS=scalar in
// the environment forces the reference path (useful for cross-machine
// bitwise replay).

#include <cstddef>
#include <span>
#include <string_view>

namespace rsp::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  // y = A^T x, A row-major rows x cols, y has cols entries
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
};

const KernelTable& table_for(Isa isa);

// Table selected for this process.
const KernelTable& active();
Isa active_isa();
bool cpu_has_avx2();
bool cpu_has_neon();
// Best SIMD table this host supports, or Scalar.
Isa simd_isa();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double nrm2_sq(std::span<const double> a) { return dot(a, a); }

}  // namespace rsp::kernels
